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

use serde::{Deserialize, Serialize};

use crate::itemset::Itemset;
use crate::sim::{WireMessage, COUNT_BYTES, HEADER_FIELD_BYTES, ITEM_BYTES};

/// Locally frequent candidates of one site at level `k`, with local counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    pub site_id: usize,
    pub k: usize,
    pub entries: Vec<(Itemset, u64)>,
}

/// Center asks a site for the local counts of itemsets it did not report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRequest {
    pub k: usize,
    pub itemsets: Vec<Itemset>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResponse {
    pub site_id: usize,
    pub k: usize,
    pub counts: Vec<(Itemset, u64)>,
}

/// Globally frequent k-itemsets broadcast by the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalResult {
    pub k: usize,
    pub frequent: Vec<(Itemset, u64)>,
    pub continue_flag: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProtocolMessage {
    LocalReport(LocalReport),
    CountRequest(CountRequest),
    CountResponse(CountResponse),
    GlobalResult(GlobalResult),
}

fn counted_bytes(entries: &[(Itemset, u64)]) -> u64 {
    entries
        .iter()
        .map(|(x, _)| x.len() as u64 * ITEM_BYTES + COUNT_BYTES)
        .sum()
}

impl WireMessage for ProtocolMessage {
    fn kind(&self) -> &'static str {
        match self {
            ProtocolMessage::LocalReport(_) => "LocalReport",
            ProtocolMessage::CountRequest(_) => "CountRequest",
            ProtocolMessage::CountResponse(_) => "CountResponse",
            ProtocolMessage::GlobalResult(_) => "GlobalResult",
        }
    }

    fn level(&self) -> usize {
        match self {
            ProtocolMessage::LocalReport(m) => m.k,
            ProtocolMessage::CountRequest(m) => m.k,
            ProtocolMessage::CountResponse(m) => m.k,
            ProtocolMessage::GlobalResult(m) => m.k,
        }
    }

    fn item_count(&self) -> u64 {
        (match self {
            ProtocolMessage::LocalReport(m) => m.entries.len(),
            ProtocolMessage::CountRequest(m) => m.itemsets.len(),
            ProtocolMessage::CountResponse(m) => m.counts.len(),
            ProtocolMessage::GlobalResult(m) => m.frequent.len(),
        }) as u64
    }

    // header fields: site_id + k for reports and responses, k for requests,
    // k + continue_flag for results
    fn payload_bytes(&self) -> u64 {
        match self {
            ProtocolMessage::LocalReport(m) => 2 * HEADER_FIELD_BYTES + counted_bytes(&m.entries),
            ProtocolMessage::CountRequest(m) => {
                HEADER_FIELD_BYTES
                    + m.itemsets
                        .iter()
                        .map(|x| x.len() as u64 * ITEM_BYTES)
                        .sum::<u64>()
            }
            ProtocolMessage::CountResponse(m) => 2 * HEADER_FIELD_BYTES + counted_bytes(&m.counts),
            ProtocolMessage::GlobalResult(m) => 2 * HEADER_FIELD_BYTES + counted_bytes(&m.frequent),
        }
    }
}
