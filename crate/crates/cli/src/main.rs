#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod manifest;

#[derive(Debug, Parser)]
#[command(
    name = "neutralflow",
    version,
    about = "Mean curvature flow of twisting line congruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one initial–boundary value problem to steady state.
    Solve(Common),
    /// Evolve a family of leaves with boundaries on a fixed congruence.
    Family(Common),
    /// Compare the reduced equation with the full graph flow.
    Oracle(OracleArgs),
    /// Run the randomised geometry property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for perturbation signs and sampled jets.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Drift coefficient of the reduced equation.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub k: Option<u8>,
    /// Use the `2C0·cot 2θ₀ + C1` Neumann slope.
    #[arg(long)]
    pub paper_literal: bool,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated sample angles.
    #[arg(long)]
    pub thetas: Option<String>,
}

#[derive(Debug, Args, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub jets: Option<usize>,
    /// Replace every tolerance by this value.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

/// Exit statuses: success, configuration or precondition error, and a run
/// that finished without meeting its goal.
pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_UNMET: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match cli.command {
        Command::Solve(c) => commands::solve(&c, start),
        Command::Family(c) => commands::family(&c, start),
        Command::Oracle(o) => commands::oracle(&o, start),
        Command::Verify(v) => commands::verify(&v, start),
    };
    ExitCode::from(code)
}
