use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polarchan::search::{Init, SolverConfig};

#[derive(Debug, Parser)]
#[command(
    name = "polarchan",
    version,
    about = "Identify unitary channels by polar fixed-point iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a unitary to (ρ, σ) pairs read from disk or generated from a seed.
    Solve(SolveArgs),
    /// Recover a hidden unitary from simulated measurements.
    Reconstruct(ReconstructArgs),
    /// Single-pair and multi-pair convergence traces on a random exact instance.
    ReproEx1(ReproEx1Args),
    /// Repeated reconstructions of the three-qubit benchmark circuit.
    ReproEx2(ReproEx2Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Identity,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Circuit {
    Example2,
}

/// Solver flags; unset values fall back to the command's base configuration.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub stall_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
}

impl SolverArgs {
    /// Overlays the flags on `base`. A random start draws from `seed`.
    pub fn config(&self, base: SolverConfig, seed: u64) -> SolverConfig {
        SolverConfig {
            max_iters: self.max_iters.unwrap_or(base.max_iters),
            tol: self.tol.unwrap_or(base.tol),
            stall_tol: self.stall_tol.unwrap_or(base.stall_tol),
            init: match self.init {
                None => base.init,
                Some(InitKind::Identity) => Init::Identity,
                Some(InitKind::Random) => Init::Random { seed },
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Base seed; falls back to POLARCHAN_SEED, then 0.
    #[arg(long, env = "POLARCHAN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub pairs: u64,
    /// Directory holding rho.json/sigma.json or rho_K.json/sigma_K.json.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Matrix file with the hidden unitary.
    #[arg(long = "in", conflicts_with = "circuit")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub circuit: Option<Circuit>,
    /// Use a probe state with a repeated eigenvalue (rejected by design).
    #[arg(long)]
    pub degenerate_rho0: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ReproEx1Args {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub pairs: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ReproEx2Args {
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Worker threads for independent runs.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[command(flatten)]
    pub common: Common,
}
