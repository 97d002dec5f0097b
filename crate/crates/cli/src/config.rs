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

use std::path::PathBuf;
use std::str::FromStr;

use dmine_core::{MinSupport, PartitionStrategy};

use crate::CliError;

/// `T=<avg_len>,I=<items>,D=<txns>,seed=<u64>`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyntheticParams {
    pub avg_len: usize,
    pub n_items: usize,
    pub n_transactions: usize,
    pub seed: u64,
}

impl FromStr for SyntheticParams {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Config(format!("--synthetic {s:?}: {why}"));
        let (mut t, mut i, mut d, mut seed) = (None, None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let slot = match key.trim() {
                "T" => &mut t,
                "I" => &mut i,
                "D" => &mut d,
                "seed" => &mut seed,
                other => return Err(bad(&format!("unknown key {other:?}"))),
            };
            let parsed = value
                .trim()
                .parse::<u64>()
                .map_err(|_| bad(&format!("{key} is not an integer")))?;
            if slot.replace(parsed).is_some() {
                return Err(bad(&format!("{key} given twice")));
            }
        }
        Ok(SyntheticParams {
            avg_len: t.ok_or_else(|| bad("missing T"))? as usize,
            n_items: i.ok_or_else(|| bad("missing I"))? as usize,
            n_transactions: d.ok_or_else(|| bad("missing D"))? as usize,
            seed: seed.unwrap_or(0),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataSource {
    File(PathBuf),
    Synthetic(SyntheticParams),
}

/// `contiguous | roundrobin | random:<seed>`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionArg(pub PartitionStrategy);

impl FromStr for PartitionArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let strategy = match s {
            "contiguous" => PartitionStrategy::Contiguous,
            "roundrobin" | "round-robin" => PartitionStrategy::RoundRobin,
            _ => match s.strip_prefix("random:") {
                Some(seed) => PartitionStrategy::Random {
                    seed: seed.parse().map_err(|_| {
                        CliError::Config(format!("--partition {s:?}: seed is not a u64"))
                    })?,
                },
                None => {
                    return Err(CliError::Config(format!(
                        "--partition {s:?}: expected contiguous, roundrobin or random:<seed>"
                    )))
                }
            },
        };
        Ok(PartitionArg(strategy))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Improved,
    Cd,
    Sequential,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Improved => "improved",
            Algorithm::Cd => "cd",
            Algorithm::Sequential => "sequential",
        }
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "improved" => Ok(Algorithm::Improved),
            "cd" => Ok(Algorithm::Cd),
            "sequential" => Ok(Algorithm::Sequential),
            _ => Err(CliError::Config(format!(
                "unknown algorithm {s:?}; expected improved, cd or sequential"
            ))),
        }
    }
}

/// A minimum support together with the exact text it was given as.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinsupArg {
    pub raw: String,
    pub value: MinSupport,
}

impl FromStr for MinsupArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let value = s
            .parse::<MinSupport>()
            .map_err(|e| CliError::Config(format!("--minsup {s:?}: {e}")))?;
        Ok(MinsupArg {
            raw: s.to_string(),
            value,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub source: DataSource,
    pub minsup: MinsupArg,
    pub n_sites: usize,
    pub partition: PartitionStrategy,
    pub algorithm: Algorithm,
    pub out: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub count_colocated_messages: bool,
    /// Fill the wall_ms column; off by default so outputs are reproducible.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(source: DataSource, minsup: &str) -> Result<Self, CliError> {
        Ok(RunConfig {
            source,
            minsup: minsup.parse()?,
            n_sites: 1,
            partition: PartitionStrategy::Contiguous,
            algorithm: Algorithm::Improved,
            out: None,
            metrics: None,
            trace: None,
            labels: None,
            count_colocated_messages: true,
            timings: false,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub source: DataSource,
    pub minsups: Vec<MinsupArg>,
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub n_sites: usize,
    pub partition: PartitionStrategy,
    pub count_colocated_messages: bool,
    pub metrics: Option<PathBuf>,
}
