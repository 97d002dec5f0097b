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

use std::time::Duration;

use serde::Serialize;

use crate::miner::MiningResult;

/// Counters for one level of a mining run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundMetrics {
    pub k: usize,
    /// Distinct candidates generated at any site.
    pub candidates_generated: u64,
    /// Distinct candidates that survived local pruning somewhere and were
    /// therefore counted on at least one matrix.
    pub candidates_after_local_prune: u64,
    /// Distinct itemsets the center polled for.
    pub candidates_polled: u64,
    pub messages_sent: u64,
    pub payload_bytes: u64,
    /// Sum over sites of the locally frequent candidates reported.
    pub llk_total: u64,
    pub lk_size: u64,
}

impl RoundMetrics {
    pub fn candidates_pruned_local(&self) -> u64 {
        self.candidates_generated - self.candidates_after_local_prune
    }
}

/// One message as recorded by the simulated network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub seq: u64,
    pub from: String,
    pub to: String,
    pub k: usize,
    #[serde(rename = "type")]
    pub kind: String,
    pub items: u64,
    pub bytes: u64,
}

impl TraceRecord {
    /// Canonical single-line JSON form.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace records always serialize")
    }
}

/// Everything a mining run produces.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub result: MiningResult,
    pub metrics: Vec<RoundMetrics>,
    pub trace: Vec<TraceRecord>,
    /// Raw scans per site over the whole run.
    pub site_scans: Vec<u64>,
    /// Wall-clock time per round; never part of deterministic output.
    pub round_wall: Vec<Duration>,
}

impl RunOutput {
    pub fn total_messages(&self) -> u64 {
        self.metrics.iter().map(|m| m.messages_sent).sum()
    }

    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in &self.trace {
            out.push_str(&rec.to_json_line());
            out.push('\n');
        }
        out
    }
}
