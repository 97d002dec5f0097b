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

//! Distributed frequent-itemset mining.
//!
//! Each site converts its horizontal partition into an [`LMatrix`] with a
//! single pass, then answers every support query by ANDing item columns.
//! A center site collects locally frequent candidates, polls the sites that
//! stayed silent, and broadcasts the globally frequent itemsets of each
//! level. A sequential Apriori miner and a Count Distribution baseline run
//! over the same counting core for comparison.

pub mod baseline_cd;
pub mod dataset;
mod error;
pub mod itemset;
pub mod lmatrix;
pub mod metrics;
pub mod miner;
pub mod protocol;
pub mod sim;

pub use crate::dataset::{
    generate_synthetic, load_fimi, parse_fimi, partition, PartitionSpec, PartitionStrategy,
    TransactionDb,
};
pub use crate::error::{Error, Result};
pub use crate::itemset::{threshold, Item, Itemset, MinSupport};
pub use crate::lmatrix::{LMatrix, ScanCounter};
pub use crate::metrics::{RoundMetrics, RunOutput, TraceRecord};
pub use crate::miner::{apriori_gen, sequential_apriori, MiningResult};
pub use crate::protocol::{run_improved, run_improved_with, ImprovedConfig, ImprovedRun};
pub use crate::baseline_cd::run_cd;
