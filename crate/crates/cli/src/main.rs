// Copyright 2026 The mbgp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `mbgp`: simulate, detect, analyze and report multipath BGP deployments.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 partial failure.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ConfigFile;
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "mbgp",
    version,
    about = "Multipath BGP detection and traceroute characterization"
)]
struct Cli {
    /// Flat key=value file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic scenario and every artifact derived from it.
    Simulate(SimulateArgs),
    /// Query looking glasses for M-BGP evidence.
    Detect(DetectArgs),
    /// Profile deployments from traceroutes.
    Analyze(AnalyzeArgs),
    /// Aggregate an evidence file into summary tables.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Output directory.
    #[arg(long = "out", value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub routers: Option<usize>,
    #[arg(long)]
    pub peers: Option<usize>,
    /// Weights of 2, 3 and 4 installed links, e.g. 82.8/8.7/8.4.
    #[arg(long = "link-mix", value_name = "A/B/C")]
    pub link_mix: Option<String>,
    #[arg(long = "max-paths")]
    pub max_paths: Option<usize>,
    /// Flow hasher used for load sharing.
    #[arg(long)]
    pub hash: Option<String>,
    #[arg(long = "source-as")]
    pub source_as: Option<u32>,
    /// Traceroutes per destination.
    #[arg(long)]
    pub probes: Option<u32>,
    /// Seconds between probes to one destination.
    #[arg(long)]
    pub interval: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Looking-glass fixture directory (`<router>/summary.txt`, ...).
    #[arg(long, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
    /// Scenario file for the `sim` transport.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub transport: Option<String>,
    /// Evidence output file.
    #[arg(long = "out", value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Query log; defaults to the evidence path with `.log` appended.
    #[arg(long, value_name = "FILE")]
    pub log: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub prefixes: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub ixp: Option<PathBuf>,
    /// Requests per minute across all routers.
    #[arg(long = "rate-limit")]
    pub rate_limit: Option<u32>,
    #[arg(long)]
    pub clock: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Traceroute file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub primary: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub secondary: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub ixp: Option<PathBuf>,
    #[arg(long = "source-as")]
    pub source_as: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report file; stdout when omitted.
    #[arg(long = "out", value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Evidence file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long = "as-rank", value_name = "FILE")]
    pub as_rank: Option<PathBuf>,
    /// Upper bounds of the rank groups, e.g. 100,1000,10000.
    #[arg(long = "group-bounds", value_name = "A,B,C")]
    pub group_bounds: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long = "out", value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a, &cfg),
        Command::Detect(a) => commands::detect(&a, &cfg),
        Command::Analyze(a) => commands::analyze(&a, &cfg),
        Command::Report(a) => commands::report(&a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mbgp: {e}");
            e.exit_code()
        }
    }
}
