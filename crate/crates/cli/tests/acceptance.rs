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

//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Run with `--nocapture` to see the report:
//!
//!     cargo test -p dmine-cli --test acceptance -- --nocapture

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use dmine_core::{
    generate_synthetic, parse_fimi, partition, run_cd, run_improved, sequential_apriori, Item,
    Itemset, LMatrix, MinSupport, PartitionSpec, PartitionStrategy, ScanCounter, TransactionDb,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAPER_DB: &str = "1 2 3\n1 2 4 5\n1 3 5\n";
const CORPUS_SEED: u64 = 0x5eed_2026;
const CORPUS_DBS: usize = 50;
const SUPPORTS: [(u64, u64); 3] = [(1, 5), (2, 5), (3, 5)];
const SITE_COUNTS: [usize; 4] = [1, 2, 3, 4];
/// Corpus instances (contiguous strategy, all s and n) on which the improved
/// protocol counted strictly fewer candidates than CD in some round. Pinned
/// from the first run of this suite.
const PINNED_STRICT_ECONOMY: usize = 97;

enum Verdict {
    Pass(String),
    Flag(String),
    Fail(String),
}

struct Report {
    lines: Vec<String>,
    failed: usize,
}

impl Report {
    fn record(&mut self, id: usize, name: &str, started: Instant, verdict: Verdict) {
        let elapsed = started.elapsed();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Flag(d) => ("PASS (flagged)", d),
            Verdict::Fail(d) => {
                self.failed += 1;
                ("FAIL", d)
            }
        };
        self.lines.push(format!(
            "[criterion {id}] {tag} {name} ({:.2}s): {detail}",
            elapsed.as_secs_f64()
        ));
    }
}

// ---------------------------------------------------------------------------
// oracle: brute force over raw transactions, independent of the matrix and of
// candidate generation

fn naive_support(db: &TransactionDb, items: &[Item]) -> u64 {
    db.transactions()
        .iter()
        .filter(|t| items.iter().all(|i| t.items().contains(i)))
        .count() as u64
}

fn enumerate_frequent(db: &TransactionDb, s: MinSupport) -> BTreeMap<Itemset, u64> {
    let universe = db.universe();
    let d = db.size() as u128;
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << universe) {
        let items: Vec<Item> = (0..universe as Item).filter(|i| mask >> i & 1 == 1).collect();
        let c = naive_support(db, &items);
        if c as u128 * s.denominator() as u128 >= s.numerator() as u128 * d {
            out.insert(Itemset::new(items), c);
        }
    }
    out
}

/// Seeded corpus with item popularity drifting along the transaction order,
/// so contiguous partitions see different local distributions.
fn corpus() -> Vec<TransactionDb> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_DBS)
        .map(|_| {
            let n_tx = rng.random_range(4..=40usize);
            let n_items = rng.random_range(2..=10usize);
            let txs = (0..n_tx)
                .map(|t| {
                    let pos = t as f64 / n_tx as f64;
                    let mut items: Vec<Item> = (0..n_items)
                        .filter(|&i| {
                            let centre = i as f64 / n_items as f64;
                            let p = 0.65 - 0.5 * (centre - pos).abs();
                            rng.random_bool(p.clamp(0.05, 0.95))
                        })
                        .map(|i| i as Item)
                        .collect();
                    if items.is_empty() {
                        items.push(rng.random_range(0..n_items) as Item);
                    }
                    Itemset::new(items)
                })
                .collect();
            TransactionDb::new(txs, n_items).unwrap()
        })
        .collect()
}

fn strategies(db_index: usize) -> [PartitionStrategy; 3] {
    [
        PartitionStrategy::Contiguous,
        PartitionStrategy::RoundRobin,
        PartitionStrategy::Random {
            seed: db_index as u64,
        },
    ]
}

fn paper_db() -> TransactionDb {
    parse_fimi(PAPER_DB).unwrap()
}

fn singleton_items(frequent: &BTreeMap<Itemset, u64>) -> Vec<Item> {
    frequent
        .keys()
        .filter(|x| x.len() == 1)
        .map(|x| x.items()[0])
        .collect()
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Verdict {
    let db = paper_db();
    let s = MinSupport::new(2, 3).unwrap();
    let m = LMatrix::build(&db, &ScanCounter::new());
    let ac = m.support(&Itemset::from([1, 3])).unwrap();
    if ac != 2 {
        return Verdict::Fail(format!("support(AC) = {ac}"));
    }
    let expected = vec![1, 2, 3, 5];
    let mut checked = vec![];
    let seq = sequential_apriori(&db, s).unwrap();
    if singleton_items(&seq.frequent) != expected {
        return Verdict::Fail(format!("sequential singletons {:?}", singleton_items(&seq.frequent)));
    }
    checked.push("sequential".to_string());
    for n in 1..=3 {
        let parts = partition(&db, &PartitionSpec::new(n, PartitionStrategy::Contiguous)).unwrap();
        let imp = run_improved(&parts, s).unwrap().output.result;
        let cd = run_cd(&parts, s).unwrap().result;
        for (name, r) in [("improved", &imp), ("cd", &cd)] {
            if singleton_items(&r.frequent) != expected {
                return Verdict::Fail(format!(
                    "{name} n={n} singletons {:?}",
                    singleton_items(&r.frequent)
                ));
            }
            checked.push(format!("{name}/n={n}"));
        }
    }
    Verdict::Pass(format!(
        "support(AC)=2; singletons [A,B,C,E] for {}",
        checked.join(", ")
    ))
}

struct CorpusStats {
    instances: usize,
    rounds: usize,
    improved_msg_violations: Vec<String>,
    cd_msg_violations: Vec<String>,
    scan_violations: Vec<String>,
    prune_violations: Vec<String>,
    prune_decisions: usize,
    economy_violations: Vec<String>,
    strict_economy: usize,
    contiguous_instances: usize,
}

/// Criterion 2 itself, gathering the per-instance data criteria 3-6 check.
fn criterion_2(stats: &mut CorpusStats) -> Verdict {
    let mut mismatches = Vec::new();
    for (di, db) in corpus().iter().enumerate() {
        for &(num, den) in &SUPPORTS {
            let s = MinSupport::new(num, den).unwrap();
            let truth = enumerate_frequent(db, s);
            let seq = sequential_apriori(db, s).unwrap();
            if seq.frequent != truth {
                mismatches.push(format!("db{di} s={s}: sequential != enumeration"));
            }
            for &n in &SITE_COUNTS {
                for (si, strategy) in strategies(di).into_iter().enumerate() {
                    let tag = format!("db{di} s={s} n={n} strategy#{si}");
                    let parts = partition(db, &PartitionSpec::new(n, strategy)).unwrap();
                    let imp = run_improved(&parts, s).unwrap();
                    let cd = run_cd(&parts, s).unwrap();
                    stats.instances += 1;
                    if imp.output.result != seq || imp.output.result.frequent != truth {
                        mismatches.push(format!("{tag}: improved"));
                    }
                    if cd.result != seq || cd.result.frequent != truth {
                        mismatches.push(format!("{tag}: cd"));
                    }

                    // criterion 3
                    for m in &imp.output.metrics {
                        stats.rounds += 1;
                        if m.messages_sent > 4 * n as u64 {
                            stats
                                .improved_msg_violations
                                .push(format!("{tag} k={}: {}", m.k, m.messages_sent));
                        }
                    }
                    for m in &cd.metrics {
                        if m.messages_sent != (n * (n - 1)) as u64 {
                            stats
                                .cd_msg_violations
                                .push(format!("{tag} k={}: {}", m.k, m.messages_sent));
                        }
                    }

                    // criterion 4
                    if imp.output.site_scans.iter().any(|&c| c != 1) {
                        stats
                            .scan_violations
                            .push(format!("{tag}: {:?}", imp.output.site_scans));
                    }

                    // criterion 5
                    for round in &imp.audit {
                        for (site, pruned) in round.locally_pruned.iter().enumerate() {
                            let local = s.threshold(parts[site].size() as u64);
                            for x in pruned {
                                stats.prune_decisions += 1;
                                if naive_support(&parts[site], x.items()) >= local {
                                    stats
                                        .prune_violations
                                        .push(format!("{tag}: {x} locally frequent at site {site}"));
                                }
                            }
                        }
                        for x in round.generated.difference(&round.counted) {
                            stats.prune_decisions += 1;
                            if truth.contains_key(x) {
                                stats
                                    .prune_violations
                                    .push(format!("{tag}: {x} pruned at every site"));
                            }
                        }
                        for (x, _) in &round.center_pruned {
                            stats.prune_decisions += 1;
                            if truth.contains_key(x) {
                                stats
                                    .prune_violations
                                    .push(format!("{tag}: {x} pruned by the center"));
                            }
                        }
                    }

                    // criterion 6
                    if strategy == PartitionStrategy::Contiguous {
                        stats.contiguous_instances += 1;
                        let mut strict = false;
                        if imp.output.metrics.len() != cd.metrics.len() {
                            stats.economy_violations.push(format!("{tag}: round counts differ"));
                        }
                        for (a, b) in imp.output.metrics.iter().zip(&cd.metrics) {
                            if a.candidates_after_local_prune > b.candidates_generated {
                                stats.economy_violations.push(format!(
                                    "{tag} k={}: {} > {}",
                                    a.k, a.candidates_after_local_prune, b.candidates_generated
                                ));
                            }
                            strict |= a.candidates_after_local_prune < b.candidates_generated;
                        }
                        stats.strict_economy += usize::from(strict);
                    }
                }
            }
        }
    }
    if mismatches.is_empty() {
        Verdict::Pass(format!(
            "{} instances ({} dbs x {} supports x {} site counts x 3 strategies): improved and cd equal sequential and enumeration",
            stats.instances,
            CORPUS_DBS,
            SUPPORTS.len(),
            SITE_COUNTS.len()
        ))
    } else {
        Verdict::Fail(format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]))
    }
}

fn first_or_none(v: &[String]) -> String {
    v.first().cloned().unwrap_or_default()
}

fn criterion_3(stats: &CorpusStats) -> Verdict {
    if stats.improved_msg_violations.is_empty() && stats.cd_msg_violations.is_empty() {
        Verdict::Pass(format!(
            "{} improved rounds within 4n; every cd round exactly n(n-1)",
            stats.rounds
        ))
    } else {
        Verdict::Fail(format!(
            "improved over 4n: {} ({}); cd != n(n-1): {} ({})",
            stats.improved_msg_violations.len(),
            first_or_none(&stats.improved_msg_violations),
            stats.cd_msg_violations.len(),
            first_or_none(&stats.cd_msg_violations)
        ))
    }
}

fn criterion_4(stats: &CorpusStats) -> Verdict {
    // support queries on a built matrix never count as scans
    let db = generate_synthetic(5000, 40, 6, 11).unwrap();
    let counter = ScanCounter::new();
    let m = LMatrix::build(&db, &counter);
    let pairs: Vec<Itemset> = (0..40u32)
        .flat_map(|a| (a + 1..40).map(move |b| Itemset::from([a, b])))
        .collect();
    m.support_batch(&pairs).unwrap();
    for x in &pairs {
        m.support(x).unwrap();
    }
    if counter.raw_scans() != 1 {
        return Verdict::Fail(format!("support queries moved raw_scans to {}", counter.raw_scans()));
    }
    let parts = partition(&db, &PartitionSpec::new(4, PartitionStrategy::RoundRobin)).unwrap();
    let run = run_improved(&parts, MinSupport::new(1, 20).unwrap()).unwrap();
    if run.output.site_scans != [1, 1, 1, 1] {
        return Verdict::Fail(format!("synthetic run scans {:?}", run.output.site_scans));
    }
    if !stats.scan_violations.is_empty() {
        return Verdict::Fail(format!(
            "{} corpus runs rescanned, first: {}",
            stats.scan_violations.len(),
            stats.scan_violations[0]
        ));
    }
    Verdict::Pass(format!(
        "raw_scans == 1 per site on {} corpus runs and a {}-level synthetic run; {} support queries added no scans",
        stats.instances,
        run.output.metrics.len(),
        2 * pairs.len()
    ))
}

fn criterion_5(stats: &CorpusStats) -> Verdict {
    if stats.prune_violations.is_empty() {
        Verdict::Pass(format!(
            "{} pruning decisions checked against the oracle, 0 violations",
            stats.prune_decisions
        ))
    } else {
        Verdict::Fail(format!(
            "{} violations, first: {}",
            stats.prune_violations.len(),
            stats.prune_violations[0]
        ))
    }
}

fn criterion_6(stats: &CorpusStats) -> Verdict {
    if !stats.economy_violations.is_empty() {
        return Verdict::Fail(format!(
            "{} rounds where improved counted more than cd, first: {}",
            stats.economy_violations.len(),
            stats.economy_violations[0]
        ));
    }
    if stats.strict_economy == 0 {
        return Verdict::Fail("no instance with strictly fewer candidates".into());
    }
    if stats.strict_economy != PINNED_STRICT_ECONOMY {
        return Verdict::Fail(format!(
            "strictly-fewer instances changed: {} (pinned {PINNED_STRICT_ECONOMY})",
            stats.strict_economy
        ));
    }
    Verdict::Pass(format!(
        "improved <= cd in every round of {} contiguous instances; strictly fewer on {}",
        stats.contiguous_instances, stats.strict_economy
    ))
}

fn soft_bound(elapsed: Duration, bound: Duration) -> Result<bool, ()> {
    if elapsed <= bound {
        Ok(false)
    } else if elapsed <= 2 * bound {
        Ok(true)
    } else {
        Err(())
    }
}

fn criterion_7() -> Verdict {
    let s = MinSupport::new(5, 100).unwrap();
    let started = Instant::now();
    let db = generate_synthetic(100_000, 100, 10, 42).unwrap();
    let parts = partition(&db, &PartitionSpec::new(4, PartitionStrategy::Contiguous)).unwrap();
    let run = run_improved(&parts, s).unwrap();
    let end_to_end = started.elapsed();
    if run.output.result.is_empty() {
        return Verdict::Fail("no frequent itemsets; the smoke run is vacuous".into());
    }

    let m = LMatrix::build(&db, &ScanCounter::new());
    let pairs: Vec<Itemset> = (0..100u32)
        .flat_map(|a| (a + 1..100).map(move |b| Itemset::from([a, b])))
        .take(1000)
        .collect();
    let started = Instant::now();
    let counts = m.support_batch(&pairs).unwrap();
    let batch = started.elapsed();
    assert_eq!(counts.len(), 1000);

    let detail = format!(
        "end-to-end {:.2}s (bound 30s, {} itemsets, {} levels); 1000-pair batch {:.1}ms (bound 100ms)",
        end_to_end.as_secs_f64(),
        run.output.result.len(),
        run.output.metrics.len(),
        batch.as_secs_f64() * 1000.0
    );
    match (
        soft_bound(end_to_end, Duration::from_secs(30)),
        soft_bound(batch, Duration::from_millis(100)),
    ) {
        (Ok(false), Ok(false)) => Verdict::Pass(detail),
        (Ok(_), Ok(_)) => Verdict::Flag(detail),
        _ => Verdict::Fail(detail),
    }
}

fn criterion_8() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for attempt in 0..2 {
        let path = |name: &str| dir.path().join(format!("{name}{attempt}"));
        let status = Command::new(env!("CARGO_BIN_EXE_dmine"))
            .args(["--synthetic", "T=10,I=100,D=100000,seed=42"])
            .args(["--minsup", "0.05", "--sites", "4", "--algorithm", "improved"])
            .arg("--out")
            .arg(path("result.json"))
            .arg("--metrics")
            .arg(path("metrics.csv"))
            .arg("--trace")
            .arg(path("trace.jsonl"))
            .status()
            .unwrap();
        if !status.success() {
            return Verdict::Fail(format!("dmine exited with {status}"));
        }
        outputs.push(
            ["result.json", "metrics.csv", "trace.jsonl"].map(|f| std::fs::read(path(f)).unwrap()),
        );
    }
    let names = ["result JSON", "metrics CSV", "trace"];
    let differing: Vec<&str> = (0..3)
        .filter(|&i| outputs[0][i] != outputs[1][i])
        .map(|i| names[i])
        .collect();
    if differing.is_empty() {
        Verdict::Pass(format!(
            "two runs byte-identical ({} + {} + {} bytes)",
            outputs[0][0].len(),
            outputs[0][1].len(),
            outputs[0][2].len()
        ))
    } else {
        Verdict::Fail(format!("outputs differ: {}", differing.join(", ")))
    }
}

#[test]
fn acceptance() {
    let mut report = Report {
        lines: Vec::new(),
        failed: 0,
    };

    let t = Instant::now();
    let v = criterion_1();
    let v = match v {
        Verdict::Pass(d) if t.elapsed() >= Duration::from_secs(1) => {
            Verdict::Fail(format!("{d}; took over 1s"))
        }
        v => v,
    };
    report.record(1, "paper worked example", t, v);

    let mut stats = CorpusStats {
        instances: 0,
        rounds: 0,
        improved_msg_violations: vec![],
        cd_msg_violations: vec![],
        scan_violations: vec![],
        prune_violations: vec![],
        prune_decisions: 0,
        economy_violations: vec![],
        strict_economy: 0,
        contiguous_instances: 0,
    };
    let t = Instant::now();
    let v = criterion_2(&mut stats);
    let v = match v {
        Verdict::Pass(d) if t.elapsed() >= Duration::from_secs(60) => {
            Verdict::Fail(format!("{d}; took over 60s"))
        }
        v => v,
    };
    report.record(2, "oracle equivalence", t, v);

    let t = Instant::now();
    report.record(3, "O(n) messages per round", t, criterion_3(&stats));
    let t = Instant::now();
    report.record(4, "single raw scan per site", t, criterion_4(&stats));
    let t = Instant::now();
    report.record(5, "pruning soundness", t, criterion_5(&stats));
    let t = Instant::now();
    report.record(6, "candidate economy", t, criterion_6(&stats));
    let t = Instant::now();
    report.record(7, "performance smoke", t, criterion_7());
    let t = Instant::now();
    report.record(8, "determinism", t, criterion_8());

    let mut text = String::new();
    for line in &report.lines {
        let _ = writeln!(text, "{line}");
    }
    println!("{text}");
    assert_eq!(report.failed, 0, "acceptance failures:\n{text}");
}
