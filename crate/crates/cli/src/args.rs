use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use purify_core::feedback::Strategy;
use purify_core::sde::{NoiseKind, Scheme};

use crate::config::Format;

#[derive(Debug, Parser)]
#[command(name = "purify", version, about = "Qubit purification by weak measurement and feedback")]
pub struct Cli {
    #[command(flatten)]
    pub io: IoArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// JSON file with settings keyed by flag name, or a manifest to replay.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Manifest location; defaults to `<out>.manifest.json`, or stderr.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-strength measurements with feedback after each one.
    Discrete(DiscreteArgs),
    /// Ensemble of continuous-measurement trajectories.
    Sde(SdeArgs),
    /// Mean entropy without feedback, by quadrature.
    Classical(ClassicalArgs),
    /// Time saved by feedback for a list of target entropies.
    Speedup(SpeedupArgs),
    /// Exhaustive search over adaptive measurement angles.
    VerifyOptimality(OptimalityArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Discrete(_) => "discrete",
            Command::Sde(_) => "sde",
            Command::Classical(_) => "classical",
            Command::Speedup(_) => "speedup",
            Command::VerifyOptimality(_) => "verify-optimality",
        }
    }
}

#[derive(Debug, Args)]
pub struct DiscreteArgs {
    /// Initial linear entropy.
    #[arg(long)]
    pub p0: Option<f64>,
    /// Measurement contrast |2κ − 1|.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// optimal | none | fixed-theta=X | custom=a:b:c
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SdeArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Total evolution time.
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub p0: Option<f64>,
    /// Record the entropy every this many steps.
    #[arg(long)]
    pub record_every: Option<usize>,
    /// two-point | gaussian
    #[arg(long)]
    pub noise: Option<NoiseKind>,
    /// kraus | euler-maruyama
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Tolerance of the no-feedback reference column.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Last time on the grid.
    #[arg(long)]
    pub time: Option<f64>,
    /// Number of evenly spaced times from 0.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SpeedupArgs {
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Comma-separated final entropies.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<f64>>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Also draw the curve as SVG.
    #[arg(long, value_name = "PATH")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimalityArgs {
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Polar angles in the search grid (odd).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub p0: Option<f64>,
    /// Initial polar angle.
    #[arg(long)]
    pub theta0: Option<f64>,
    /// Cap on visited tree edges.
    #[arg(long)]
    pub budget: Option<u64>,
}
