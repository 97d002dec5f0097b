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

//! Brute-force oracles, independent of the matrix and of apriori-gen.

#![allow(dead_code)]

use std::collections::BTreeMap;

use dmine_core::{Item, Itemset, MinSupport, TransactionDb};
use proptest::prelude::*;

/// Transactions containing every item of `x`, counted by scanning.
pub fn naive_support(db: &TransactionDb, x: &Itemset) -> u64 {
    db.transactions()
        .iter()
        .filter(|t| x.items().iter().all(|i| t.items().contains(i)))
        .count() as u64
}

/// Every non-empty subset of `0..universe` with at most `max_len` items.
pub fn all_itemsets(universe: usize, max_len: usize) -> Vec<Itemset> {
    assert!(universe <= 20);
    (1u32..(1 << universe))
        .filter(|mask| mask.count_ones() as usize <= max_len)
        .map(|mask| {
            Itemset::new((0..universe as Item).filter(|i| mask >> i & 1 == 1).collect())
        })
        .collect()
}

/// Frequent itemsets by exhaustive enumeration of the whole lattice.
pub fn exhaustive_frequent(db: &TransactionDb, s: MinSupport) -> BTreeMap<Itemset, u64> {
    if db.is_empty() {
        return BTreeMap::new();
    }
    let d = db.size() as u128;
    all_itemsets(db.universe(), db.universe())
        .into_iter()
        .map(|x| {
            let c = naive_support(db, &x);
            (x, c)
        })
        // c >= s * D  <=>  c * den >= num * D
        .filter(|&(_, c)| c as u128 * s.denominator() as u128 >= s.numerator() as u128 * d)
        .collect()
}

/// Small random databases: `1..=max_tx` non-empty transactions over
/// `1..=max_items` items.
pub fn small_db(max_tx: usize, max_items: usize) -> impl Strategy<Value = TransactionDb> {
    (1..=max_items).prop_flat_map(move |items| {
        prop::collection::vec(
            prop::collection::btree_set(0..items as Item, 1..=items),
            1..=max_tx,
        )
        .prop_map(move |txs| {
            TransactionDb::new(
                txs.into_iter()
                    .map(|t| Itemset::new(t.into_iter().collect()))
                    .collect(),
                items,
            )
            .unwrap()
        })
    })
}
