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

//! The center-site mining protocol.
//!
//! Per level, every site generates candidates from its heavy itemsets,
//! prunes them against its previous-level counts, counts the survivors on
//! its matrix and reports the locally frequent ones (LL_k). The center
//! accepts itemsets reported by all sites, bounds the rest, polls silent
//! sites for those whose bound still reaches the threshold, and broadcasts
//! L_k. Sites then keep the members of L_k that are also locally frequent
//! as their heavy itemsets for the next level.

mod center;
mod messages;
mod site;

use std::collections::BTreeSet;
use std::time::Instant;

pub use self::center::{Aggregation, CenterState, Pending};
pub use self::messages::{CountRequest, CountResponse, GlobalResult, LocalReport, ProtocolMessage};
pub use self::site::{local_prune, LocalPrune, SiteState};

use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{Itemset, MinSupport};
use crate::metrics::{RoundMetrics, RunOutput};
use crate::miner::MiningResult;
use crate::sim::{Actor, Network};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImprovedConfig {
    /// Tally messages between site 0 and the center it hosts.
    pub count_colocated_messages: bool,
}

impl Default for ImprovedConfig {
    fn default() -> Self {
        ImprovedConfig {
            count_colocated_messages: true,
        }
    }
}

/// What happened to the candidates of one level, for auditing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundAudit {
    pub k: usize,
    pub generated: BTreeSet<Itemset>,
    /// Survivors of local pruning at one or more sites.
    pub counted: BTreeSet<Itemset>,
    /// Per site, the candidates its local prune removed.
    pub locally_pruned: Vec<Vec<Itemset>>,
    /// Union of all LL_k.
    pub reported: BTreeSet<Itemset>,
    /// Itemsets dropped by the center's upper bound, with that bound.
    pub center_pruned: Vec<(Itemset, u64)>,
    pub polled: BTreeSet<Itemset>,
    pub frequent: Vec<(Itemset, u64)>,
}

#[derive(Clone, Debug)]
pub struct ImprovedRun {
    pub output: RunOutput,
    pub audit: Vec<RoundAudit>,
}

pub fn run_improved(partitions: &[TransactionDb], minsup: MinSupport) -> Result<ImprovedRun> {
    run_improved_with(partitions, minsup, &ImprovedConfig::default())
}

/// Runs the protocol to completion over one site per partition.
pub fn run_improved_with(
    partitions: &[TransactionDb],
    minsup: MinSupport,
    config: &ImprovedConfig,
) -> Result<ImprovedRun> {
    if partitions.iter().all(TransactionDb::is_empty) {
        return Err(Error::InvalidArgument(
            "need at least one non-empty partition".into(),
        ));
    }
    let n = partitions.len();
    let universe = partitions.iter().map(TransactionDb::universe).max().unwrap_or(0);
    let mut sites: Vec<SiteState> = partitions
        .iter()
        .enumerate()
        .map(|(i, p)| SiteState::new(i, p.clone().with_universe(universe), minsup))
        .collect();
    let mut center = CenterState::new(sites.iter().map(SiteState::partition_size).collect(), minsup);
    let mut net: Network<ProtocolMessage> = Network::new();
    net.colocate(Actor::Site(0), Actor::Center, config.count_colocated_messages);

    let mut result = MiningResult::new(minsup, center.total_size());
    let mut metrics = Vec::new();
    let mut audit = Vec::new();
    let mut round_wall = Vec::new();

    for k in 1.. {
        let started = Instant::now();
        let mut round = RoundAudit {
            k,
            ..RoundAudit::default()
        };

        // sites: generate, prune, count, report
        let mut llk_total = 0;
        for site in &mut sites {
            let candidates = site.local_candidates(k)?;
            round.generated.extend(candidates.iter().cloned());
            let LocalPrune { kept, pruned } = site.prune(&candidates)?;
            round.counted.extend(kept.iter().cloned());
            round.locally_pruned.push(pruned);
            let report = site.local_report(k, &kept)?;
            llk_total += report.entries.len() as u64;
            round.reported.extend(report.entries.iter().map(|(x, _)| x.clone()));
            net.send(
                Actor::Site(site.site_id()),
                Actor::Center,
                ProtocolMessage::LocalReport(report),
            );
        }

        // center: merge, bound, poll
        let reports = net
            .drain(Actor::Center)
            .into_iter()
            .map(|(from, msg)| match msg {
                ProtocolMessage::LocalReport(r) => Ok(r),
                other => Err(unexpected(from, Actor::Center, &other)),
            })
            .collect::<Result<Vec<_>>>()?;
        let Aggregation {
            pruned, requests, ..
        } = center.aggregate(reports)?;
        round.center_pruned = pruned;
        for (site, req) in requests {
            round.polled.extend(req.itemsets.iter().cloned());
            net.send(Actor::Center, Actor::Site(site), ProtocolMessage::CountRequest(req));
        }

        // sites: answer polls
        for site in &mut sites {
            let me = Actor::Site(site.site_id());
            for (from, msg) in net.drain(me) {
                match msg {
                    ProtocolMessage::CountRequest(req) => {
                        let resp = site.handle_count_request(&req)?;
                        net.send(me, from, ProtocolMessage::CountResponse(resp));
                    }
                    other => return Err(unexpected(from, me, &other)),
                }
            }
        }

        // center: finalize and broadcast
        let responses = net
            .drain(Actor::Center)
            .into_iter()
            .map(|(from, msg)| match msg {
                ProtocolMessage::CountResponse(r) => Ok(r),
                other => Err(unexpected(from, Actor::Center, &other)),
            })
            .collect::<Result<Vec<_>>>()?;
        let global = center.finalize(responses)?;
        for i in 0..n {
            net.send(
                Actor::Center,
                Actor::Site(i),
                ProtocolMessage::GlobalResult(global.clone()),
            );
        }

        // sites: learn heavy itemsets
        for site in &mut sites {
            let me = Actor::Site(site.site_id());
            for (from, msg) in net.drain(me) {
                match msg {
                    ProtocolMessage::GlobalResult(r) => site.update_heavy(&r)?,
                    other => return Err(unexpected(from, me, &other)),
                }
            }
        }
        debug_assert!(net.is_idle());

        let tally = net.take_tally();
        metrics.push(RoundMetrics {
            k,
            candidates_generated: round.generated.len() as u64,
            candidates_after_local_prune: round.counted.len() as u64,
            candidates_polled: round.polled.len() as u64,
            messages_sent: tally.messages,
            payload_bytes: tally.bytes,
            llk_total,
            lk_size: global.frequent.len() as u64,
        });
        result.frequent.extend(global.frequent.iter().cloned());
        round.frequent = global.frequent;
        audit.push(round);
        round_wall.push(started.elapsed());

        if !global.continue_flag {
            break;
        }
    }

    Ok(ImprovedRun {
        output: RunOutput {
            result,
            metrics,
            trace: net.into_trace(),
            site_scans: sites.iter().map(SiteState::raw_scans).collect(),
            round_wall,
        },
        audit,
    })
}

fn unexpected(from: Actor, to: Actor, msg: &ProtocolMessage) -> Error {
    use crate::sim::WireMessage;
    Error::Protocol(format!("unexpected {} from {from} to {to}", msg.kind()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_fimi, partition, PartitionSpec, PartitionStrategy};
    use crate::miner::sequential_apriori;

    fn paper() -> TransactionDb {
        parse_fimi("0 1 2\n0 1 3 4\n0 2 4\n").unwrap()
    }

    fn split(db: &TransactionDb, n: usize) -> Vec<TransactionDb> {
        partition(db, &PartitionSpec::new(n, PartitionStrategy::Contiguous)).unwrap()
    }

    #[test]
    fn paper_two_sites_matches_oracle() {
        let s: MinSupport = "2/3".parse().unwrap();
        let run = run_improved(&split(&paper(), 2), s).unwrap();
        assert_eq!(run.output.result, sequential_apriori(&paper(), s).unwrap());
        assert_eq!(
            run.output.result.level_sets(1),
            [0u32, 1, 2, 4].map(Itemset::single)
        );
        assert_eq!(run.output.site_scans, [1, 1]);
    }

    #[test]
    fn paper_round_one_trace() {
        let run = run_improved(&split(&paper(), 2), "2/3".parse().unwrap()).unwrap();
        let first: Vec<(String, String, String)> = run
            .output
            .trace
            .iter()
            .filter(|t| t.k == 1)
            .map(|t| (t.from.clone(), t.to.clone(), t.kind.clone()))
            .collect();
        let expect = [
            ("site:0", "center", "LocalReport"),
            ("site:1", "center", "LocalReport"),
            ("center", "site:0", "CountRequest"),
            ("center", "site:1", "CountRequest"),
            ("site:0", "center", "CountResponse"),
            ("site:1", "center", "CountResponse"),
            ("center", "site:0", "GlobalResult"),
            ("center", "site:1", "GlobalResult"),
        ];
        let expect: Vec<(String, String, String)> = expect
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect();
        assert_eq!(first, expect);
        assert_eq!(run.output.metrics[0].messages_sent, 8);
    }

    #[test]
    fn colocated_messages_can_be_excluded() {
        let s: MinSupport = "2/3".parse().unwrap();
        let parts = split(&paper(), 2);
        let counted = run_improved(&parts, s).unwrap();
        let excluded = run_improved_with(
            &parts,
            s,
            &ImprovedConfig {
                count_colocated_messages: false,
            },
        )
        .unwrap();
        assert_eq!(counted.output.result, excluded.output.result);
        assert_eq!(counted.output.trace, excluded.output.trace);
        assert_eq!(excluded.output.metrics[0].messages_sent, 4);
    }

    #[test]
    fn single_site_never_polls() {
        let db = paper();
        for s in ["1/3", "2/3", "1"] {
            let s: MinSupport = s.parse().unwrap();
            let run = run_improved(&split(&db, 1), s).unwrap();
            assert_eq!(run.output.result, sequential_apriori(&db, s).unwrap());
            assert!(run.output.trace.iter().all(|t| t.kind != "CountRequest"));
        }
    }

    #[test]
    fn rejects_all_empty_partitions() {
        let empty = TransactionDb::new(vec![], 3).unwrap();
        assert!(run_improved(&[empty], "0.5".parse().unwrap()).is_err());
    }

    #[test]
    fn tolerates_an_empty_partition() {
        let s: MinSupport = "1/3".parse().unwrap();
        let empty = TransactionDb::new(vec![], 5).unwrap();
        let mut parts = split(&paper(), 2);
        parts.push(empty);
        let run = run_improved(&parts, s).unwrap();
        assert_eq!(run.output.result, sequential_apriori(&paper(), s).unwrap());
    }
}
