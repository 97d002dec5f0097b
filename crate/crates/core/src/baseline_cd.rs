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

//! Count Distribution baseline.
//!
//! Every site generates the same candidates from the previous global level,
//! counts them on its own matrix and sends its whole count vector to every
//! peer. Each site then sums the vectors itself and derives L_k, so a round
//! always costs n(n-1) messages.

use std::time::Instant;

use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{Itemset, MinSupport};
use crate::lmatrix::{LMatrix, ScanCounter};
use crate::metrics::{RoundMetrics, RunOutput};
use crate::miner::{apriori_gen, singletons, MiningResult};
use crate::sim::{Actor, Network, WireMessage, COUNT_BYTES, HEADER_FIELD_BYTES};

/// A site's local counts, aligned with the candidate list every site shares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub site_id: usize,
    pub k: usize,
    pub counts: Vec<u64>,
}

impl WireMessage for CountVector {
    fn kind(&self) -> &'static str {
        "CountVector"
    }

    fn level(&self) -> usize {
        self.k
    }

    fn item_count(&self) -> u64 {
        self.counts.len() as u64
    }

    fn payload_bytes(&self) -> u64 {
        2 * HEADER_FIELD_BYTES + self.counts.len() as u64 * COUNT_BYTES
    }
}

/// The view of one site during a round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CdRoundState {
    pub k: usize,
    pub candidates: Vec<Itemset>,
    /// Indexed by site id; filled in as vectors arrive.
    pub site_counts: Vec<Option<Vec<u64>>>,
    pub global_frequent: Vec<(Itemset, u64)>,
}

struct CdSite {
    id: usize,
    matrix: LMatrix,
    scans: ScanCounter,
    round: CdRoundState,
}

impl CdSite {
    fn derive_frequent(&mut self, n: usize, global_threshold: u64) -> Result<Vec<(Itemset, u64)>> {
        let mut totals = vec![0u64; self.round.candidates.len()];
        for (site, counts) in self.round.site_counts.iter().enumerate().take(n) {
            let counts = counts.as_ref().ok_or_else(|| {
                Error::Protocol(format!(
                    "site {} has no level-{} counts from site {site}",
                    self.id, self.round.k
                ))
            })?;
            for (t, c) in totals.iter_mut().zip(counts) {
                *t += c;
            }
        }
        Ok(self
            .round
            .candidates
            .iter()
            .zip(totals)
            .filter(|&(_, c)| c >= global_threshold)
            .map(|(x, c)| (x.clone(), c))
            .collect())
    }
}

pub fn run_cd(partitions: &[TransactionDb], minsup: MinSupport) -> Result<RunOutput> {
    if partitions.iter().all(TransactionDb::is_empty) {
        return Err(Error::InvalidArgument(
            "need at least one non-empty partition".into(),
        ));
    }
    let n = partitions.len();
    let universe = partitions.iter().map(TransactionDb::universe).max().unwrap_or(0);
    let total: u64 = partitions.iter().map(|p| p.size() as u64).sum();
    let global_threshold = minsup.threshold(total);
    let mut sites: Vec<CdSite> = partitions
        .iter()
        .enumerate()
        .map(|(id, p)| {
            let scans = ScanCounter::new();
            let matrix = LMatrix::build(&p.clone().with_universe(universe), &scans);
            CdSite {
                id,
                matrix,
                scans,
                round: CdRoundState::default(),
            }
        })
        .collect();
    let mut net: Network<CountVector> = Network::new();
    let mut result = MiningResult::new(minsup, total);
    let mut metrics = Vec::new();
    let mut round_wall = Vec::new();

    for k in 1.. {
        let started = Instant::now();
        for site in &mut sites {
            let prev: Vec<Itemset> = site
                .round
                .global_frequent
                .iter()
                .map(|(x, _)| x.clone())
                .collect();
            let candidates = if k == 1 {
                singletons(universe)
            } else {
                apriori_gen(&prev)?
            };
            let counts = site.matrix.support_batch(&candidates)?;
            let mut site_counts = vec![None; n];
            site_counts[site.id] = Some(counts.clone());
            site.round = CdRoundState {
                k,
                candidates,
                site_counts,
                global_frequent: Vec::new(),
            };
            for peer in (0..n).filter(|&p| p != site.id) {
                net.send(
                    Actor::Site(site.id),
                    Actor::Site(peer),
                    CountVector {
                        site_id: site.id,
                        k,
                        counts: counts.clone(),
                    },
                );
            }
        }

        let mut levels = Vec::with_capacity(n);
        for site in &mut sites {
            for (_, vector) in net.drain(Actor::Site(site.id)) {
                if vector.k != k || vector.counts.len() != site.round.candidates.len() {
                    return Err(Error::Protocol(format!(
                        "site {} got a malformed count vector from site {}",
                        site.id, vector.site_id
                    )));
                }
                let slot = site
                    .round
                    .site_counts
                    .get_mut(vector.site_id)
                    .ok_or_else(|| Error::Protocol(format!("unknown site {}", vector.site_id)))?;
                if slot.replace(vector.counts).is_some() {
                    return Err(Error::Protocol(format!(
                        "site {} got two vectors from site {}",
                        site.id, vector.site_id
                    )));
                }
            }
            let frequent = site.derive_frequent(n, global_threshold)?;
            site.round.global_frequent = frequent.clone();
            levels.push(frequent);
        }
        if levels.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Internal(format!("sites disagree on L_{k}")));
        }
        let level = levels.swap_remove(0);

        let tally = net.take_tally();
        metrics.push(RoundMetrics {
            k,
            candidates_generated: sites[0].round.candidates.len() as u64,
            candidates_after_local_prune: sites[0].round.candidates.len() as u64,
            candidates_polled: 0,
            messages_sent: tally.messages,
            payload_bytes: tally.bytes,
            llk_total: 0,
            lk_size: level.len() as u64,
        });
        round_wall.push(started.elapsed());
        let done = level.len() < k + 1;
        result.frequent.extend(level);
        if done {
            break;
        }
    }

    Ok(RunOutput {
        result,
        metrics,
        trace: net.into_trace(),
        site_scans: sites.iter().map(|s| s.scans.raw_scans()).collect(),
        round_wall,
    })
}
