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

//! Command-line front end for dmine: load or generate a database, split it
//! across sites, mine it with one of the algorithms and write the results,
//! per-round metrics and an optional message trace.

pub mod config;
pub mod output;

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dmine_core::{
    generate_synthetic, load_fimi, partition, run_cd, run_improved_with, ImprovedConfig,
    PartitionSpec, RunOutput, TransactionDb,
};
use thiserror::Error;

pub use crate::config::{
    Algorithm, DataSource, MinsupArg, PartitionArg, RunConfig, SweepConfig, SyntheticParams,
};
use crate::output::{metrics_csv, parse_labels, result_json, SweepCsv};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("bad input data: {0}")]
    Data(String),

    #[error("mining failed: {0}")]
    Mining(#[from] dmine_core::Error),
}

impl CliError {
    /// Process exit status; each error class gets its own.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Data(_) => 4,
            CliError::Mining(_) => 5,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_source(source: &DataSource) -> Result<TransactionDb, CliError> {
    match source {
        DataSource::File(path) => {
            let file = fs::File::open(path).map_err(io_err(path))?;
            load_fimi(BufReader::new(file)).map_err(|e| match e {
                dmine_core::Error::Io(msg) => CliError::Io {
                    path: path.clone(),
                    source: std::io::Error::other(msg),
                },
                other => CliError::Data(format!("{}: {other}", path.display())),
            })
        }
        DataSource::Synthetic(p) => {
            generate_synthetic(p.n_transactions, p.n_items, p.avg_len, p.seed)
                .map_err(|e| CliError::Config(format!("--synthetic: {e}")))
        }
    }
}

/// Everything a single run writes, as in-memory text.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub result_json: String,
    pub metrics_csv: String,
    pub trace_jsonl: String,
    pub output: RunOutput,
}

fn mine(
    db: &TransactionDb,
    algorithm: Algorithm,
    minsup: dmine_core::MinSupport,
    n_sites: usize,
    partition_strategy: dmine_core::PartitionStrategy,
    count_colocated_messages: bool,
) -> Result<RunOutput, CliError> {
    if db.is_empty() {
        return Err(CliError::Data("the database has no transactions".into()));
    }
    if algorithm == Algorithm::Sequential {
        return Ok(dmine_core::miner::sequential_apriori_run(db, minsup)?);
    }
    let parts = partition(db, &PartitionSpec::new(n_sites, partition_strategy))
        .map_err(|e| CliError::Config(format!("--sites {n_sites}: {e}")))?;
    Ok(match algorithm {
        Algorithm::Improved => {
            run_improved_with(
                &parts,
                minsup,
                &ImprovedConfig {
                    count_colocated_messages,
                },
            )?
            .output
        }
        Algorithm::Cd => run_cd(&parts, minsup)?,
        Algorithm::Sequential => unreachable!(),
    })
}

/// Runs one configuration and renders its outputs without touching the
/// output paths.
pub fn execute(config: &RunConfig) -> Result<RunArtifacts, CliError> {
    let db = load_source(&config.source)?;
    execute_on(config, &db)
}

pub fn execute_on(config: &RunConfig, db: &TransactionDb) -> Result<RunArtifacts, CliError> {
    let labels = match &config.labels {
        Some(path) => Some(parse_labels(
            &fs::read_to_string(path).map_err(io_err(path))?,
        )?),
        None => None,
    };
    let output = mine(
        db,
        config.algorithm,
        config.minsup.value,
        config.n_sites,
        config.partition,
        config.count_colocated_messages,
    )?;
    let wall = config.timings.then_some(output.round_wall.as_slice());
    Ok(RunArtifacts {
        result_json: result_json(&output.result, &config.minsup.raw, labels.as_ref()),
        metrics_csv: metrics_csv(config.algorithm.name(), &output.metrics, wall),
        trace_jsonl: output.trace_jsonl(),
        output,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

/// Runs and writes the result JSON (stdout when no `--out`), the metrics
/// CSV and the trace.
pub fn run(config: &RunConfig) -> Result<RunArtifacts, CliError> {
    let artifacts = execute(config)?;
    match &config.out {
        Some(path) => write_file(path, &artifacts.result_json)?,
        None => print!("{}", artifacts.result_json),
    }
    if let Some(path) = &config.metrics {
        write_file(path, &artifacts.metrics_csv)?;
    }
    if let Some(path) = &config.trace {
        write_file(path, &artifacts.trace_jsonl)?;
    }
    Ok(artifacts)
}

/// Runs every (size, minsup, algorithm) point sequentially over prefixes of
/// one database and returns the sweep CSV.
pub fn sweep(config: &SweepConfig) -> Result<String, CliError> {
    if config.minsups.is_empty() || config.sizes.is_empty() || config.algorithms.is_empty() {
        return Err(CliError::Config(
            "sweep needs at least one minsup, size and algorithm".into(),
        ));
    }
    let full = match config.source {
        DataSource::Synthetic(p) => {
            let largest = config.sizes.iter().copied().max().unwrap_or(0);
            load_source(&DataSource::Synthetic(SyntheticParams {
                n_transactions: largest.max(p.n_transactions),
                ..p
            }))?
        }
        DataSource::File(_) => load_source(&config.source)?,
    };
    let mut csv = SweepCsv::new();
    for &size in &config.sizes {
        if size > full.size() {
            return Err(CliError::Config(format!(
                "sweep size {size} exceeds the {} available transactions",
                full.size()
            )));
        }
        let db = full.prefix(size);
        for minsup in &config.minsups {
            for &algorithm in &config.algorithms {
                let started = Instant::now();
                let out = mine(
                    &db,
                    algorithm,
                    minsup.value,
                    config.n_sites,
                    config.partition,
                    config.count_colocated_messages,
                )?;
                let total: Duration = started.elapsed();
                csv.push_run(
                    &minsup.raw,
                    size,
                    algorithm.name(),
                    &out.metrics,
                    &out.round_wall,
                    total,
                );
            }
        }
    }
    let text = csv.finish();
    match &config.metrics {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(text)
}
