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

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense item identifier; doubles as the column index in an `LMatrix`.
pub type Item = u32;

/// A strictly ascending, duplicate-free list of items.
///
/// Itemsets order by length first and lexicographically within a length, so
/// every level-wise result iterates the same way regardless of how it was
/// produced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    /// Builds an itemset from arbitrary items, sorting and removing duplicates.
    pub fn new(mut items: Vec<Item>) -> Self {
        items.sort_unstable();
        items.dedup();
        Itemset(items)
    }

    /// Wraps items that the caller already knows to be strictly ascending.
    pub fn from_sorted(items: Vec<Item>) -> Result<Self> {
        if items.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "itemset {items:?} is not strictly ascending"
            )));
        }
        Ok(Itemset(items))
    }

    pub fn single(item: Item) -> Self {
        Itemset(vec![item])
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: Item) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// True when every item of `self` occurs in the sorted slice `other`.
    pub fn is_subset_of_sorted(&self, other: &[Item]) -> bool {
        let mut rest = other.iter();
        'outer: for item in &self.0 {
            for o in rest.by_ref() {
                match o.cmp(item) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// The `len()` subsets obtained by dropping one item each.
    pub fn drop_one_subsets(&self) -> impl Iterator<Item = Itemset> + '_ {
        (0..self.0.len()).map(move |skip| {
            Itemset(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &item)| item)
                    .collect(),
            )
        })
    }

    pub fn max_item(&self) -> Option<Item> {
        self.0.last().copied()
    }

    pub fn into_vec(self) -> Vec<Item> {
        self.0
    }
}

impl Ord for Itemset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Itemset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

impl From<&[Item]> for Itemset {
    fn from(items: &[Item]) -> Self {
        Itemset::new(items.to_vec())
    }
}

impl<const N: usize> From<[Item; N]> for Itemset {
    fn from(items: [Item; N]) -> Self {
        Itemset::new(items.to_vec())
    }
}

/// Minimum support as an exact fraction in (0, 1].
///
/// Parsed once from a decimal (`0.05`) or a fraction (`2/3`) and kept as a
/// reduced rational so the frequency test never compares floats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MinSupport {
    num: u64,
    den: u64,
}

impl MinSupport {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::InvalidArgument(format!(
                "minimum support {num}/{den} is not in (0, 1]"
            )));
        }
        let g = gcd(num, den);
        Ok(MinSupport {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Smallest integer count that is at least `self * size`.
    pub fn threshold(&self, size: u64) -> u64 {
        let scaled = self.num as u128 * size as u128;
        scaled.div_ceil(self.den as u128) as u64
    }
}

/// `ceil(s * size)`; an itemset is frequent w.r.t. `(s, size)` iff its count
/// is at least this value.
pub fn threshold(s: MinSupport, size: u64) -> u64 {
    s.threshold(size)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for MinSupport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse minimum support {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let num = n.trim().parse::<u64>().map_err(|_| bad())?;
            let den = d.trim().parse::<u64>().map_err(|_| bad())?;
            return MinSupport::new(num, den);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if (int_part.is_empty() && frac_part.is_empty())
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || frac_part.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int_val: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int_val
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        MinSupport::new(num, den)
    }
}
