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

//! Column-major bit matrix for support counting.
//!
//! Column `c` is the metavector of item `c`: bit `r` is set iff transaction
//! `r` contains the item. The support of an itemset is the popcount of the
//! AND of its columns, so once the matrix is built the raw transactions are
//! never read again.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::Itemset;

const WORD_BITS: usize = 64;

/// Counts full passes over raw transaction lists.
#[derive(Debug, Default)]
pub struct ScanCounter {
    raw_scans: AtomicU64,
}

impl ScanCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_scan(&self) {
        self.raw_scans.fetch_add(1, Ordering::Relaxed);
    }

    pub fn raw_scans(&self) -> u64 {
        self.raw_scans.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMatrix {
    n_rows: usize,
    n_cols: usize,
    words_per_col: usize,
    // column-major: column c occupies words [c * words_per_col, (c + 1) * words_per_col)
    bits: Vec<u64>,
}

impl LMatrix {
    /// Builds the matrix in a single pass over `db`, recording that pass on
    /// `counter`. Trailing bits past `n_rows` stay zero.
    pub fn build(db: &TransactionDb, counter: &ScanCounter) -> LMatrix {
        let n_rows = db.size();
        let n_cols = db.universe();
        let words_per_col = n_rows.div_ceil(WORD_BITS);
        let mut bits = vec![0u64; words_per_col * n_cols];
        counter.record_scan();
        for (row, t) in db.transactions().iter().enumerate() {
            let word = row / WORD_BITS;
            let mask = 1u64 << (row % WORD_BITS);
            for &item in t.items() {
                bits[item as usize * words_per_col + word] |= mask;
            }
        }
        LMatrix {
            n_rows,
            n_cols,
            words_per_col,
            bits,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    fn column(&self, c: usize) -> &[u64] {
        &self.bits[c * self.words_per_col..(c + 1) * self.words_per_col]
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.n_rows && col < self.n_cols, "({row}, {col}) out of bounds");
        self.column(col)[row / WORD_BITS] >> (row % WORD_BITS) & 1 == 1
    }

    fn validate(&self, x: &Itemset) -> Result<()> {
        match x.max_item() {
            None => Err(Error::EmptyItemset),
            Some(max) if max as usize >= self.n_cols => Err(Error::ItemOutOfRange {
                item: max,
                universe: self.n_cols,
            }),
            Some(_) => Ok(()),
        }
    }

    /// Number of rows containing every item of `x`.
    pub fn support(&self, x: &Itemset) -> Result<u64> {
        self.validate(x)?;
        let mut scratch = Vec::new();
        Ok(self.count_unchecked(x, &mut scratch))
    }

    /// Like [`support`](Self::support), but items outside the universe count
    /// as never present. Used to answer requests from peers whose universe
    /// may be wider than the local one.
    pub fn support_or_zero(&self, x: &Itemset) -> Result<u64> {
        match self.validate(x) {
            Ok(()) => Ok(self.count_unchecked(x, &mut Vec::new())),
            Err(Error::ItemOutOfRange { .. }) => Ok(0),
            Err(e) => Err(e),
        }
    }

    /// Supports of every itemset in `xs`, reusing one intersection buffer.
    pub fn support_batch(&self, xs: &[Itemset]) -> Result<Vec<u64>> {
        for (index, x) in xs.iter().enumerate() {
            self.validate(x).map_err(|e| Error::Batch {
                index,
                source: Box::new(e),
            })?;
        }
        let mut scratch = Vec::with_capacity(self.words_per_col);
        Ok(xs
            .iter()
            .map(|x| self.count_unchecked(x, &mut scratch))
            .collect())
    }

    /// Batch counting where out-of-universe itemsets count zero.
    pub fn support_batch_or_zero(&self, xs: &[Itemset]) -> Result<Vec<u64>> {
        let mut scratch = Vec::with_capacity(self.words_per_col);
        xs.iter()
            .enumerate()
            .map(|(index, x)| match self.validate(x) {
                Ok(()) => Ok(self.count_unchecked(x, &mut scratch)),
                Err(Error::ItemOutOfRange { .. }) => Ok(0),
                Err(e) => Err(Error::Batch {
                    index,
                    source: Box::new(e),
                }),
            })
            .collect()
    }

    // Columns are ANDed in ascending item order; stops as soon as the running
    // intersection is empty.
    fn count_unchecked(&self, x: &Itemset, scratch: &mut Vec<u64>) -> u64 {
        let items = x.items();
        let first = self.column(items[0] as usize);
        match items.len() {
            1 => popcount(first),
            2 => {
                let second = self.column(items[1] as usize);
                first
                    .iter()
                    .zip(second)
                    .map(|(a, b)| (a & b).count_ones() as u64)
                    .sum()
            }
            _ => {
                scratch.clear();
                scratch.extend_from_slice(first);
                for &item in &items[1..] {
                    let mut any = 0u64;
                    for (acc, w) in scratch.iter_mut().zip(self.column(item as usize)) {
                        *acc &= w;
                        any |= *acc;
                    }
                    if any == 0 {
                        return 0;
                    }
                }
                popcount(scratch)
            }
        }
    }

    /// Rows as '0'/'1' strings, one line per transaction.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.n_rows * (self.n_cols + 1));
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Same as [`dump`](Self::dump) restricted to a column range, with
    /// space-separated cells.
    pub fn dump_columns(&self, cols: std::ops::Range<usize>) -> String {
        let mut out = String::new();
        for r in 0..self.n_rows {
            for (i, c) in cols.clone().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", u8::from(self.get(r, c)));
            }
            out.push('\n');
        }
        out
    }
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}
