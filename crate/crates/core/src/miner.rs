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

//! Level-wise Apriori machinery shared by every algorithm.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset, MinSupport};
use crate::lmatrix::{LMatrix, ScanCounter};
use crate::metrics::{RoundMetrics, RunOutput};

/// Globally frequent itemsets with their support counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiningResult {
    pub minsup: MinSupport,
    pub db_size: u64,
    pub threshold: u64,
    pub frequent: BTreeMap<Itemset, u64>,
}

impl MiningResult {
    pub fn new(minsup: MinSupport, db_size: u64) -> Self {
        MiningResult {
            minsup,
            db_size,
            threshold: minsup.threshold(db_size),
            frequent: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.frequent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequent.is_empty()
    }

    pub fn support(&self, x: &Itemset) -> Option<u64> {
        self.frequent.get(x).copied()
    }

    /// Frequent itemsets of length `k`, in order.
    pub fn level(&self, k: usize) -> impl Iterator<Item = (&Itemset, u64)> {
        self.frequent
            .iter()
            .filter(move |(x, _)| x.len() == k)
            .map(|(x, &c)| (x, c))
    }

    pub fn level_sets(&self, k: usize) -> Vec<Itemset> {
        self.level(k).map(|(x, _)| x.clone()).collect()
    }

    pub fn max_len(&self) -> usize {
        self.frequent.keys().map(Itemset::len).max().unwrap_or(0)
    }

    /// Checks the count threshold and downward closure.
    pub fn check_invariants(&self) -> Result<()> {
        for (x, &count) in &self.frequent {
            if count < self.threshold {
                return Err(Error::Internal(format!(
                    "{x} has count {count} below threshold {}",
                    self.threshold
                )));
            }
            if x.len() > 1 {
                if let Some(missing) = x.drop_one_subsets().find(|y| !self.frequent.contains_key(y)) {
                    return Err(Error::Internal(format!(
                        "{x} is frequent but its subset {missing} is not"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Joins frequent k-itemsets sharing their first k-1 items and drops every
/// joined (k+1)-itemset that has a k-subset outside `prev_frequent`.
///
/// Output is sorted and duplicate-free whatever the input order.
pub fn apriori_gen(prev_frequent: &[Itemset]) -> Result<Vec<Itemset>> {
    let Some(first) = prev_frequent.first() else {
        return Ok(Vec::new());
    };
    let k = first.len();
    if k == 0 || prev_frequent.iter().any(|x| x.len() != k) {
        return Err(Error::InvalidArgument(
            "apriori_gen needs non-empty itemsets of one length".into(),
        ));
    }
    let mut sorted: Vec<&Itemset> = prev_frequent.iter().collect();
    sorted.sort();
    sorted.dedup();
    let known: HashSet<&Itemset> = sorted.iter().copied().collect();

    let mut out = Vec::new();
    let mut group_start = 0;
    while group_start < sorted.len() {
        let prefix = &sorted[group_start].items()[..k - 1];
        let group_end = sorted[group_start..]
            .iter()
            .position(|x| &x.items()[..k - 1] != prefix)
            .map_or(sorted.len(), |p| group_start + p);
        for i in group_start..group_end {
            for j in i + 1..group_end {
                let mut items: Vec<Item> = sorted[i].items().to_vec();
                items.push(sorted[j].items()[k - 1]);
                let candidate = Itemset::from_sorted(items)?;
                // the two generating subsets are known; check the rest
                let survives = (0..k - 1).all(|skip| {
                    let sub: Vec<Item> = candidate
                        .items()
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &it)| it)
                        .collect();
                    known.contains(&Itemset::from_sorted(sub).expect("subset of sorted"))
                });
                if survives {
                    out.push(candidate);
                }
            }
        }
        group_start = group_end;
    }
    // groups are visited in lexicographic order and joins append ascending
    // last items, so `out` is already sorted
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// All single-item candidates of a universe.
pub fn singletons(universe: usize) -> Vec<Itemset> {
    (0..universe as Item).map(Itemset::single).collect()
}

/// Exact frequent itemsets of `db` at support `minsup`.
pub fn sequential_apriori(db: &TransactionDb, minsup: MinSupport) -> Result<MiningResult> {
    Ok(sequential_apriori_run(db, minsup)?.result)
}

/// Sequential Apriori with per-level metrics; messages are always zero.
pub fn sequential_apriori_run(db: &TransactionDb, minsup: MinSupport) -> Result<RunOutput> {
    let counter = ScanCounter::new();
    let matrix = LMatrix::build(db, &counter);
    let mut result = MiningResult::new(minsup, db.size() as u64);
    let mut metrics = Vec::new();
    let mut round_wall = Vec::new();
    // an empty database has no frequent itemsets even though ceil(s * 0) = 0
    if db.is_empty() {
        return Ok(RunOutput {
            result,
            metrics,
            trace: Vec::new(),
            site_scans: vec![counter.raw_scans()],
            round_wall,
        });
    }
    let mut candidates = singletons(db.universe());
    let mut k = 1;
    while !candidates.is_empty() {
        let started = Instant::now();
        let counts = matrix.support_batch(&candidates)?;
        let level: Vec<Itemset> = candidates
            .iter()
            .zip(&counts)
            .filter(|&(_, &c)| c >= result.threshold)
            .map(|(x, &c)| {
                result.frequent.insert(x.clone(), c);
                x.clone()
            })
            .collect();
        metrics.push(RoundMetrics {
            k,
            candidates_generated: candidates.len() as u64,
            candidates_after_local_prune: candidates.len() as u64,
            lk_size: level.len() as u64,
            ..RoundMetrics::default()
        });
        candidates = apriori_gen(&level)?;
        round_wall.push(started.elapsed());
        k += 1;
    }
    Ok(RunOutput {
        result,
        metrics,
        trace: Vec::new(),
        site_scans: vec![counter.raw_scans()],
        round_wall,
    })
}
