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

//! Center-site half of the protocol.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::itemset::{Itemset, MinSupport};

use super::messages::{CountRequest, CountResponse, GlobalResult, LocalReport};

/// A reported itemset whose global count is still being assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pending {
    pub originating: BTreeSet<usize>,
    pub count: u64,
    pub awaiting: BTreeSet<usize>,
}

/// Outcome of merging one level's reports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Aggregation {
    /// Reported by every site; the summed count is exact.
    pub immediately_frequent: Vec<(Itemset, u64)>,
    /// Dropped because their upper bound cannot reach the global threshold;
    /// paired with that bound.
    pub pruned: Vec<(Itemset, u64)>,
    /// At most one request per site, for everything it must still count.
    pub requests: BTreeMap<usize, CountRequest>,
}

#[derive(Clone, Debug)]
pub struct CenterState {
    k: usize,
    minsup: MinSupport,
    site_sizes: Vec<u64>,
    site_thresholds: Vec<u64>,
    total_size: u64,
    global_threshold: u64,
    pending: BTreeMap<Itemset, Pending>,
    immediate: Vec<(Itemset, u64)>,
    outstanding: BTreeMap<usize, Vec<Itemset>>,
    global_frequent_prev: Vec<(Itemset, u64)>,
    flag: bool,
}

impl CenterState {
    pub fn new(site_sizes: Vec<u64>, minsup: MinSupport) -> Self {
        let total_size = site_sizes.iter().sum();
        let site_thresholds = site_sizes.iter().map(|&s| minsup.threshold(s)).collect();
        CenterState {
            k: 0,
            minsup,
            site_sizes,
            site_thresholds,
            total_size,
            global_threshold: minsup.threshold(total_size),
            pending: BTreeMap::new(),
            immediate: Vec::new(),
            outstanding: BTreeMap::new(),
            global_frequent_prev: Vec::new(),
            flag: true,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.site_sizes.len()
    }

    pub fn level(&self) -> usize {
        self.k
    }

    pub fn total_size(&self) -> u64 {
        self.total_size
    }

    pub fn global_threshold(&self) -> u64 {
        self.global_threshold
    }

    pub fn flag(&self) -> bool {
        self.flag
    }

    pub fn pending(&self) -> &BTreeMap<Itemset, Pending> {
        &self.pending
    }

    /// L_{k-1} with global counts.
    pub fn global_frequent_prev(&self) -> &[(Itemset, u64)] {
        &self.global_frequent_prev
    }

    /// Upper bound on the global count of an itemset reported by
    /// `originating` with summed count `reported`: every silent site holds
    /// strictly fewer than its local threshold.
    pub fn max_count(&self, reported: u64, originating: &BTreeSet<usize>) -> u64 {
        reported
            + (0..self.n_sites())
                .filter(|i| !originating.contains(i))
                .map(|i| self.site_thresholds[i].saturating_sub(1))
                .sum::<u64>()
    }

    /// Merges one report per site for the next level.
    pub fn aggregate(&mut self, reports: Vec<LocalReport>) -> Result<Aggregation> {
        let n = self.n_sites();
        let k = self.k + 1;
        let mut seen = vec![false; n];
        for r in &reports {
            if r.k != k {
                return Err(Error::Protocol(format!(
                    "center at level {k} received a level-{} report from site {}",
                    r.k, r.site_id
                )));
            }
            match seen.get_mut(r.site_id) {
                None => {
                    return Err(Error::Protocol(format!("report from unknown site {}", r.site_id)))
                }
                Some(true) => {
                    return Err(Error::Protocol(format!(
                        "duplicate level-{k} report from site {}",
                        r.site_id
                    )))
                }
                Some(s) => *s = true,
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Protocol(format!("no level-{k} report from site {missing}")));
        }

        self.k = k;
        self.pending.clear();
        self.immediate.clear();
        self.outstanding.clear();
        if reports.iter().all(|r| r.entries.is_empty()) {
            self.flag = false;
        }

        let mut merged: BTreeMap<Itemset, (BTreeSet<usize>, u64)> = BTreeMap::new();
        for r in reports {
            let site = r.site_id;
            for (x, count) in r.entries {
                if x.len() != k {
                    return Err(Error::Protocol(format!(
                        "site {site} reported {x} at level {k}"
                    )));
                }
                if count < self.site_thresholds[site] || count > self.site_sizes[site] {
                    return Err(Error::Protocol(format!(
                        "site {site} reported {x} with count {count}, outside [{}, {}]",
                        self.site_thresholds[site], self.site_sizes[site]
                    )));
                }
                let slot = merged.entry(x).or_default();
                if !slot.0.insert(site) {
                    return Err(Error::Protocol(format!("site {site} reported an itemset twice")));
                }
                slot.1 += count;
            }
        }

        let mut out = Aggregation::default();
        for (x, (originating, count)) in merged {
            if originating.len() == n {
                // sum of local thresholds is at least the global one
                if count >= self.global_threshold {
                    out.immediately_frequent.push((x, count));
                }
                continue;
            }
            let bound = self.max_count(count, &originating);
            if bound < self.global_threshold {
                out.pruned.push((x, bound));
                continue;
            }
            let awaiting: BTreeSet<usize> = (0..n).filter(|i| !originating.contains(i)).collect();
            for &site in &awaiting {
                out.requests
                    .entry(site)
                    .or_insert_with(|| CountRequest {
                        k,
                        itemsets: Vec::new(),
                    })
                    .itemsets
                    .push(x.clone());
            }
            self.pending.insert(
                x,
                Pending {
                    originating,
                    count,
                    awaiting,
                },
            );
        }
        self.immediate = out.immediately_frequent.clone();
        self.outstanding = out
            .requests
            .iter()
            .map(|(&site, req)| (site, req.itemsets.clone()))
            .collect();
        Ok(out)
    }

    /// Adds polled counts to reported ones and decides L_k.
    pub fn finalize(&mut self, responses: Vec<CountResponse>) -> Result<GlobalResult> {
        let k = self.k;
        for resp in responses {
            if resp.k != k {
                return Err(Error::Protocol(format!(
                    "level-{} response from site {} while finalizing level {k}",
                    resp.k, resp.site_id
                )));
            }
            let Some(asked) = self.outstanding.remove(&resp.site_id) else {
                return Err(Error::Protocol(format!(
                    "unrequested or duplicate response from site {}",
                    resp.site_id
                )));
            };
            if resp.counts.len() != asked.len()
                || resp.counts.iter().zip(&asked).any(|((x, _), a)| x != a)
            {
                return Err(Error::Protocol(format!(
                    "response from site {} does not answer its request",
                    resp.site_id
                )));
            }
            for (x, count) in resp.counts {
                let p = self.pending.get_mut(&x).ok_or_else(|| {
                    Error::Protocol(format!("response for unrequested itemset {x}"))
                })?;
                if !p.awaiting.remove(&resp.site_id) {
                    return Err(Error::Protocol(format!(
                        "site {} was not polled for {x}",
                        resp.site_id
                    )));
                }
                p.count += count;
            }
        }
        if let Some(&site) = self.outstanding.keys().next() {
            return Err(Error::Protocol(format!("no response from site {site} at level {k}")));
        }

        let mut frequent = std::mem::take(&mut self.immediate);
        frequent.extend(
            std::mem::take(&mut self.pending)
                .into_iter()
                .filter(|(_, p)| p.count >= self.global_threshold)
                .map(|(x, p)| (x, p.count)),
        );
        frequent.sort();
        if frequent.len() < k + 1 {
            self.flag = false;
        }
        self.global_frequent_prev = frequent.clone();
        Ok(GlobalResult {
            k,
            frequent,
            continue_flag: self.flag,
        })
    }

    pub fn minsup(&self) -> MinSupport {
        self.minsup
    }
}
