// Copyright 2026 The dmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Deterministic in-process network shared by the distributed algorithms.
//!
//! Rounds are barrier-synchronized: actors send, then each recipient drains
//! its inbox in send order. Every send is recorded as a [`TraceRecord`] with
//! its canonical payload size.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::metrics::TraceRecord;

/// Bytes charged per header field in the canonical encoding.
pub const HEADER_FIELD_BYTES: u64 = 8;
/// Bytes charged per item id.
pub const ITEM_BYTES: u64 = 4;
/// Bytes charged per support count.
pub const COUNT_BYTES: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Actor {
    Site(usize),
    Center,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Site(i) => write!(f, "site:{i}"),
            Actor::Center => f.write_str("center"),
        }
    }
}

/// What the network needs to know about a message to account for it.
pub trait WireMessage {
    fn kind(&self) -> &'static str;
    fn level(&self) -> usize;
    /// Number of itemsets (or counts) carried.
    fn item_count(&self) -> u64;
    /// Canonical payload size in bytes.
    fn payload_bytes(&self) -> u64;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub messages: u64,
    pub bytes: u64,
}

pub struct Network<M> {
    seq: u64,
    inboxes: BTreeMap<Actor, VecDeque<(Actor, M)>>,
    trace: Vec<TraceRecord>,
    tally: Tally,
    // actor pairs on the same host whose traffic may be left out of the tally
    colocated: Vec<(Actor, Actor)>,
    count_colocated: bool,
}

impl<M: WireMessage> Network<M> {
    pub fn new() -> Self {
        Network {
            seq: 0,
            inboxes: BTreeMap::new(),
            trace: Vec::new(),
            tally: Tally::default(),
            colocated: Vec::new(),
            count_colocated: true,
        }
    }

    /// Declares `a` and `b` to share a host. Their traffic is still traced
    /// and delivered, but only tallied when `count` is true.
    pub fn colocate(&mut self, a: Actor, b: Actor, count: bool) {
        self.colocated.push((a, b));
        self.count_colocated = count;
    }

    fn is_colocated(&self, a: Actor, b: Actor) -> bool {
        self.colocated
            .iter()
            .any(|&(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    pub fn send(&mut self, from: Actor, to: Actor, msg: M) {
        debug_assert_ne!(from, to, "actors never message themselves");
        let bytes = msg.payload_bytes();
        self.trace.push(TraceRecord {
            seq: self.seq,
            from: from.to_string(),
            to: to.to_string(),
            k: msg.level(),
            kind: msg.kind().to_string(),
            items: msg.item_count(),
            bytes,
        });
        self.seq += 1;
        if self.count_colocated || !self.is_colocated(from, to) {
            self.tally.messages += 1;
            self.tally.bytes += bytes;
        }
        self.inboxes.entry(to).or_default().push_back((from, msg));
    }

    /// Removes and returns everything delivered to `actor`, oldest first.
    pub fn drain(&mut self, actor: Actor) -> Vec<(Actor, M)> {
        self.inboxes
            .get_mut(&actor)
            .map(|q| q.drain(..).collect())
            .unwrap_or_default()
    }

    /// Returns and resets the tally accumulated since the last call.
    pub fn take_tally(&mut self) -> Tally {
        std::mem::take(&mut self.tally)
    }

    pub fn is_idle(&self) -> bool {
        self.inboxes.values().all(VecDeque::is_empty)
    }

    pub fn into_trace(self) -> Vec<TraceRecord> {
        self.trace
    }
}

impl<M: WireMessage> Default for Network<M> {
    fn default() -> Self {
        Self::new()
    }
}
