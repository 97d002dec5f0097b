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

//! Local-site half of the protocol.

use std::collections::HashMap;

use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{Itemset, MinSupport};
use crate::lmatrix::{LMatrix, ScanCounter};
use crate::miner::{apriori_gen, singletons};

use super::messages::{CountRequest, CountResponse, GlobalResult, LocalReport};

/// Candidates split by the local upper-bound test.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalPrune {
    pub kept: Vec<Itemset>,
    pub pruned: Vec<Itemset>,
}

/// Keeps a candidate iff the smallest local count among its (k-1)-subsets
/// reaches `site_threshold`. That minimum bounds the candidate's own local
/// count from above. Single items have no such subsets and always pass.
pub fn local_prune(
    candidates: &[Itemset],
    local_counts_prev: &HashMap<Itemset, u64>,
    site_threshold: u64,
) -> Result<LocalPrune> {
    let mut out = LocalPrune::default();
    for x in candidates {
        if x.len() <= 1 {
            out.kept.push(x.clone());
            continue;
        }
        let mut bound = u64::MAX;
        for sub in x.drop_one_subsets() {
            let count = local_counts_prev.get(&sub).ok_or_else(|| {
                Error::Internal(format!("no local count for {sub}, a subset of candidate {x}"))
            })?;
            bound = bound.min(*count);
        }
        if bound >= site_threshold {
            out.kept.push(x.clone());
        } else {
            out.pruned.push(x.clone());
        }
    }
    Ok(out)
}

/// One local site: its partition, the matrix built from it, and what it
/// remembers between levels.
#[derive(Debug)]
pub struct SiteState {
    site_id: usize,
    partition: TransactionDb,
    matrix: LMatrix,
    scans: ScanCounter,
    minsup: MinSupport,
    local_threshold: u64,
    k: usize,
    heavy_prev: Vec<Itemset>,
    local_counts_prev: HashMap<Itemset, u64>,
    local_counts: HashMap<Itemset, u64>,
    flag: bool,
}

impl SiteState {
    /// Converts the partition to its matrix; this is the only raw scan the
    /// site ever performs.
    pub fn new(site_id: usize, partition: TransactionDb, minsup: MinSupport) -> Self {
        let scans = ScanCounter::new();
        let matrix = LMatrix::build(&partition, &scans);
        let local_threshold = minsup.threshold(partition.size() as u64);
        SiteState {
            site_id,
            partition,
            matrix,
            scans,
            minsup,
            local_threshold,
            k: 0,
            heavy_prev: Vec::new(),
            local_counts_prev: HashMap::new(),
            local_counts: HashMap::new(),
            flag: true,
        }
    }

    pub fn site_id(&self) -> usize {
        self.site_id
    }

    pub fn partition(&self) -> &TransactionDb {
        &self.partition
    }

    pub fn matrix(&self) -> &LMatrix {
        &self.matrix
    }

    pub fn partition_size(&self) -> u64 {
        self.partition.size() as u64
    }

    pub fn minsup(&self) -> MinSupport {
        self.minsup
    }

    pub fn local_threshold(&self) -> u64 {
        self.local_threshold
    }

    pub fn raw_scans(&self) -> u64 {
        self.scans.raw_scans()
    }

    pub fn flag(&self) -> bool {
        self.flag
    }

    /// Heavy (k-1)-itemsets: locally and globally frequent.
    pub fn heavy(&self) -> &[Itemset] {
        &self.heavy_prev
    }

    pub fn local_counts_prev(&self) -> &HashMap<Itemset, u64> {
        &self.local_counts_prev
    }

    /// All single items at level 1, afterwards apriori-gen over the heavy
    /// itemsets of the previous level.
    pub fn local_candidates(&self, k: usize) -> Result<Vec<Itemset>> {
        if k <= 1 {
            return Ok(singletons(self.matrix.n_cols()));
        }
        apriori_gen(&self.heavy_prev)
    }

    /// Upper-bound pruning against this site's previous-level counts.
    pub fn prune(&self, candidates: &[Itemset]) -> Result<LocalPrune> {
        local_prune(candidates, &self.local_counts_prev, self.local_threshold)
    }

    /// Counts `survivors` on the matrix and reports the locally frequent
    /// ones. The report is produced even when empty.
    pub fn local_report(&mut self, k: usize, survivors: &[Itemset]) -> Result<LocalReport> {
        if k != self.k + 1 {
            return Err(Error::Protocol(format!(
                "site {} asked for level {k} after level {}",
                self.site_id, self.k
            )));
        }
        self.k = k;
        self.local_counts.clear();
        let counts = self.matrix.support_batch_or_zero(survivors)?;
        let mut entries = Vec::new();
        for (x, count) in survivors.iter().zip(counts) {
            self.local_counts.insert(x.clone(), count);
            if count >= self.local_threshold {
                entries.push((x.clone(), count));
            }
        }
        entries.sort();
        Ok(LocalReport {
            site_id: self.site_id,
            k,
            entries,
        })
    }

    /// Exact local counts for the requested itemsets, read from the matrix.
    pub fn handle_count_request(&mut self, req: &CountRequest) -> Result<CountResponse> {
        if req.k != self.k {
            return Err(Error::Protocol(format!(
                "site {} at level {} received a level-{} request",
                self.site_id, self.k, req.k
            )));
        }
        let counts = self.matrix.support_batch_or_zero(&req.itemsets)?;
        let counts: Vec<(Itemset, u64)> = req.itemsets.iter().cloned().zip(counts).collect();
        for (x, c) in &counts {
            self.local_counts.insert(x.clone(), *c);
        }
        Ok(CountResponse {
            site_id: self.site_id,
            k: self.k,
            counts,
        })
    }

    /// Keeps the globally frequent itemsets that are also locally frequent
    /// here and rolls the level's counts over for the next prune.
    pub fn update_heavy(&mut self, result: &GlobalResult) -> Result<()> {
        if result.k != self.k {
            return Err(Error::Protocol(format!(
                "site {} at level {} received the level-{} result",
                self.site_id, self.k, result.k
            )));
        }
        let mut heavy = Vec::new();
        for (x, _) in &result.frequent {
            let count = match self.local_counts.get(x) {
                Some(&c) => c,
                None => {
                    let c = self.matrix.support_or_zero(x)?;
                    self.local_counts.insert(x.clone(), c);
                    c
                }
            };
            if count >= self.local_threshold {
                heavy.push(x.clone());
            }
        }
        heavy.sort();
        self.heavy_prev = heavy;
        self.local_counts_prev = std::mem::take(&mut self.local_counts);
        self.flag = result.continue_flag;
        Ok(())
    }
}
