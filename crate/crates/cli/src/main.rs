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
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use dmine_cli::{
    Algorithm, CliError, DataSource, MinsupArg, PartitionArg, RunConfig, SweepConfig,
    SyntheticParams,
};

#[derive(Parser)]
#[command(
    name = "dmine",
    version,
    about = "Distributed frequent-itemset mining over per-site bit matrices",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Mine one configuration (the default when no subcommand is given).
    Run(RunArgs),
    /// Sweep minimum supports and database sizes, emitting one CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// FIMI transaction file.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,

    /// Synthetic database, e.g. T=10,I=100,D=100000,seed=42.
    #[arg(long, group = "source")]
    synthetic: Option<SyntheticParams>,
}

impl SourceArgs {
    fn into_source(self) -> DataSource {
        match (self.input, self.synthetic) {
            (Some(path), _) => DataSource::File(path),
            (None, Some(p)) => DataSource::Synthetic(p),
            (None, None) => unreachable!("clap enforces one data source"),
        }
    }
}

#[derive(Args, Clone)]
struct SiteArgs {
    /// Number of sites.
    #[arg(long, default_value_t = 1)]
    sites: usize,

    /// contiguous | roundrobin | random:<seed>
    #[arg(long, default_value = "contiguous")]
    partition: PartitionArg,

    /// Count messages between site 0 and the center it hosts.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    count_colocated_messages: bool,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    source: Option<SourceArgs>,

    /// Minimum support as a decimal (0.05) or a fraction (2/3).
    #[arg(long)]
    minsup: Option<MinsupArg>,

    #[command(flatten)]
    sites: SiteArgs,

    /// improved | cd | sequential
    #[arg(long, default_value = "improved")]
    algorithm: Algorithm,

    /// Result JSON path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Per-round metrics CSV path.
    #[arg(long)]
    metrics: Option<PathBuf>,

    /// Message trace path (one JSON record per line).
    #[arg(long)]
    trace: Option<PathBuf>,

    /// Item label map, one `id:name` per line.
    #[arg(long)]
    labels: Option<PathBuf>,

    /// Fill the wall_ms metrics column.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Comma-separated minimum supports.
    #[arg(long, value_delimiter = ',', required = true)]
    minsups: Vec<MinsupArg>,

    /// Comma-separated database sizes (prefixes of one database).
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,

    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "improved,cd")]
    algorithms: Vec<Algorithm>,

    #[command(flatten)]
    sites: SiteArgs,

    /// Sweep CSV path; stdout when omitted.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

fn run_config(args: RunArgs) -> Result<RunConfig, CliError> {
    let source = args
        .source
        .ok_or_else(|| CliError::Config("one of --input or --synthetic is required".into()))?
        .into_source();
    let minsup = args
        .minsup
        .ok_or_else(|| CliError::Config("--minsup is required".into()))?;
    Ok(RunConfig {
        source,
        minsup,
        n_sites: args.sites.sites,
        partition: args.sites.partition.0,
        algorithm: args.algorithm,
        out: args.out,
        metrics: args.metrics,
        trace: args.trace,
        labels: args.labels,
        count_colocated_messages: args.sites.count_colocated_messages,
        timings: args.timings,
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Some(Command::Sweep(args)) => {
            dmine_cli::sweep(&SweepConfig {
                source: args.source.into_source(),
                minsups: args.minsups,
                sizes: args.sizes,
                algorithms: args.algorithms,
                n_sites: args.sites.sites,
                partition: args.sites.partition.0,
                count_colocated_messages: args.sites.count_colocated_messages,
                metrics: args.metrics,
            })?;
        }
        Some(Command::Run(args)) => {
            dmine_cli::run(&run_config(args)?)?;
        }
        None => {
            dmine_cli::run(&run_config(cli.run)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmine: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
