//! Scenario-driven front end for `diagscale-core`.
//!
//! A scenario file (TOML) fixes every parameter of a run; the commands turn
//! it into CSV/JSON artifacts. Output bytes depend only on the scenario bytes
//! and the seed.

// Validation is written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, Result};
pub use scenario::{LoadedScenario, Scenario};

#[derive(Debug, Parser)]
#[command(name = "diagscale", version, about = "Multi-dimensional autoscaling simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output directory; overrides the scenario's `output_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the scenario's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every surface on the grid and locate the feasible minimizer.
    Surface(CommonArgs),
    /// Run local search to convergence from the scenario's start point.
    Optimize(CommonArgs),
    /// Drive the first listed policy over the workload trace.
    Simulate(CommonArgs),
    /// Drive every listed policy over the same trace and compare.
    Compare(CommonArgs),
}

pub fn run(cli: &Cli) -> Result<()> {
    let args = match &cli.command {
        Command::Surface(a) | Command::Optimize(a) | Command::Simulate(a) | Command::Compare(a) => a,
    };
    let loaded = LoadedScenario::from_path(&args.scenario, args.seed)?;
    let out = commands::output_dir(&loaded, args.out.as_deref())?;
    match &cli.command {
        Command::Surface(_) => commands::cmd_surface(&loaded, &out),
        Command::Optimize(_) => commands::cmd_optimize(&loaded, &out),
        Command::Simulate(_) => commands::cmd_simulate(&loaded, &out),
        Command::Compare(_) => commands::cmd_compare(&loaded, &out).map(|_| ()),
    }
}
