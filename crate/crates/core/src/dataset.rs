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

//! Transaction databases: FIMI parsing, synthetic generation and horizontal
//! partitioning across sites.

use std::io::{BufRead, Write};

use rand::seq::index::sample_weighted;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset};

/// A horizontal list of transactions over the items `0..universe`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransactionDb {
    transactions: Vec<Itemset>,
    universe: usize,
}

impl TransactionDb {
    /// Validates that every transaction is non-empty and inside `universe`.
    pub fn new(transactions: Vec<Itemset>, universe: usize) -> Result<Self> {
        for t in &transactions {
            if t.is_empty() {
                return Err(Error::InvalidArgument("empty transaction".into()));
            }
            if let Some(max) = t.max_item() {
                if max as usize >= universe {
                    return Err(Error::ItemOutOfRange {
                        item: max,
                        universe,
                    });
                }
            }
        }
        Ok(TransactionDb {
            transactions,
            universe,
        })
    }

    /// Builds a database whose universe is one past the largest item seen.
    pub fn from_transactions(transactions: Vec<Itemset>) -> Self {
        let transactions: Vec<Itemset> =
            transactions.into_iter().filter(|t| !t.is_empty()).collect();
        let universe = transactions
            .iter()
            .filter_map(Itemset::max_item)
            .max()
            .map_or(0, |m| m as usize + 1);
        TransactionDb {
            transactions,
            universe,
        }
    }

    pub fn transactions(&self) -> &[Itemset] {
        &self.transactions
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of transactions.
    pub fn size(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// The first `n` transactions over the same universe.
    pub fn prefix(&self, n: usize) -> TransactionDb {
        TransactionDb {
            transactions: self.transactions[..n.min(self.size())].to_vec(),
            universe: self.universe,
        }
    }

    /// Widens the universe; never shrinks it.
    pub fn with_universe(mut self, universe: usize) -> TransactionDb {
        self.universe = self.universe.max(universe);
        self
    }

    /// Writes one line per transaction, items separated by single spaces.
    pub fn write_fimi<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for t in &self.transactions {
            let mut first = true;
            for item in t.items() {
                if !first {
                    out.write_all(b" ")?;
                }
                write!(out, "{item}")?;
                first = false;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_fimi_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_fimi(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("FIMI output is ASCII")
    }
}

/// Parses FIMI text: one transaction per line, base-10 item ids separated by
/// spaces or tabs. Blank lines are skipped, so `size()` may be smaller than
/// the raw line count.
pub fn parse_fimi(text: &str) -> Result<TransactionDb> {
    load_fimi(text.as_bytes())
}

pub fn load_fimi<R: BufRead>(reader: R) -> Result<TransactionDb> {
    let mut transactions = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let mut items = Vec::new();
        for token in line.split([' ', '\t']).filter(|t| !t.is_empty()) {
            let item = token.parse::<Item>().map_err(|_| Error::Parse {
                line: idx + 1,
                token: token.to_string(),
            })?;
            items.push(item);
        }
        if !items.is_empty() {
            transactions.push(Itemset::new(items));
        }
    }
    Ok(TransactionDb::from_transactions(transactions))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionStrategy {
    /// Equal blocks in input order; the first `size % n` blocks get one extra.
    Contiguous,
    /// Transaction `t` goes to site `t % n`.
    RoundRobin,
    /// Seeded shuffle, then contiguous blocks, each block kept in input order.
    Random { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    pub n_sites: usize,
    pub strategy: PartitionStrategy,
}

impl PartitionSpec {
    pub fn new(n_sites: usize, strategy: PartitionStrategy) -> Self {
        PartitionSpec { n_sites, strategy }
    }
}

/// Splits `db` horizontally into `spec.n_sites` non-empty partitions.
///
/// Every partition keeps the universe of `db` so all sites agree on the
/// level-1 candidates.
pub fn partition(db: &TransactionDb, spec: &PartitionSpec) -> Result<Vec<TransactionDb>> {
    let n = spec.n_sites;
    if n == 0 || db.size() < n {
        return Err(Error::Partition {
            size: db.size(),
            sites: n,
        });
    }
    let size = db.size();
    let assignment: Vec<Vec<usize>> = match spec.strategy {
        PartitionStrategy::Contiguous => contiguous_blocks(&(0..size).collect::<Vec<_>>(), n),
        PartitionStrategy::RoundRobin => (0..n).map(|s| (s..size).step_by(n).collect()).collect(),
        PartitionStrategy::Random { seed } => {
            let mut order: Vec<usize> = (0..size).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let mut blocks = contiguous_blocks(&order, n);
            for block in &mut blocks {
                block.sort_unstable();
            }
            blocks
        }
    };
    Ok(assignment
        .into_iter()
        .map(|rows| TransactionDb {
            transactions: rows
                .into_iter()
                .map(|r| db.transactions[r].clone())
                .collect(),
            universe: db.universe,
        })
        .collect())
}

fn contiguous_blocks(order: &[usize], n: usize) -> Vec<Vec<usize>> {
    let base = order.len() / n;
    let extra = order.len() % n;
    let mut blocks = Vec::with_capacity(n);
    let mut start = 0;
    for site in 0..n {
        let len = base + usize::from(site < extra);
        blocks.push(order[start..start + len].to_vec());
        start += len;
    }
    blocks
}

/// Exponent of the rank-biased item popularity: item `j` is drawn with
/// weight `1 / (j + 1)^SKEW`.
const SKEW: f64 = 0.8;

/// Generates a deterministic synthetic database.
///
/// Transaction lengths are `1 + Poisson(avg_len - 1)` clamped to
/// `n_items`; items are sampled without replacement with a rank-biased
/// popularity so that low item ids form frequent patterns.
pub fn generate_synthetic(
    n_transactions: usize,
    n_items: usize,
    avg_len: usize,
    seed: u64,
) -> Result<TransactionDb> {
    if n_items == 0 {
        return Err(Error::InvalidArgument("n_items must be at least 1".into()));
    }
    if avg_len == 0 || avg_len > n_items {
        return Err(Error::InvalidArgument(format!(
            "avg_len must be in [1, {n_items}], got {avg_len}"
        )));
    }
    if n_items > Item::MAX as usize {
        return Err(Error::InvalidArgument(format!("n_items {n_items} too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..n_items)
        .map(|j| 1.0 / ((j + 1) as f64).powf(SKEW))
        .collect();
    let lengths = (avg_len > 1)
        .then(|| Poisson::new((avg_len - 1) as f64).expect("positive Poisson mean"));

    let mut transactions = Vec::with_capacity(n_transactions);
    for _ in 0..n_transactions {
        let extra = lengths.as_ref().map_or(0, |p| p.sample(&mut rng) as usize);
        let len = (1 + extra).min(n_items);
        let picked = sample_weighted(&mut rng, n_items, |j| weights[j], len)
            .expect("weights are finite and positive");
        transactions.push(Itemset::new(picked.into_iter().map(|j| j as Item).collect()));
    }
    Ok(TransactionDb {
        transactions,
        universe: n_items,
    })
}
