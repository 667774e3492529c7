use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "orthant",
    version,
    about = "Orthant probabilities of stationary Gaussian series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "ORTHANT_WORKERS")]
    pub workers: Option<usize>,

    /// Write CSV here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First-passage-time estimate of the survival curve.
    Fpt {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        /// auto, davies_harte or durbin_levinson.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Simulate each k separately instead of reading every k off one batch.
        #[arg(long)]
        per_k: bool,
    },
    /// Genz transformed-integral Monte Carlo.
    Genz {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
        /// Evaluation cap (default 1000 k).
        #[arg(long)]
        max_evals: Option<u64>,
    },
    /// GHK simulator.
    Ghk {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
    },
    /// Slepian upper bounds.
    Bounds {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 64)]
        quad_nodes: usize,
    },
    /// All estimators and the bound side by side.
    Compare {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        /// GHK replications (default: same as --paths).
        #[arg(long)]
        draws: Option<u64>,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
        #[arg(long)]
        max_evals: Option<u64>,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = 64)]
        quad_nodes: usize,
    },
    /// Rerun one of the two reference tables with its per-k path counts.
    Table {
        #[arg(long)]
        which: u8,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
    /// Dump simulated paths, one per line.
    Paths {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        paths: usize,
        #[arg(long, default_value = "auto")]
        method: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Arfima,
    File,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Arfima)]
    pub model: ModelKind,
    /// Fractional differencing parameter, |d| < 0.5.
    #[arg(long, default_value_t = 0.2)]
    pub d: f64,
    /// Autocorrelations rho_0, rho_1, ... one per line.
    #[arg(long)]
    pub cov_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// const:<c>, lin:<a>,<b> (a + b t) or file:<path>.
    #[arg(long, default_value = "const:1")]
    pub boundary: String,
    #[arg(long, conflicts_with = "k_range")]
    pub k: Option<usize>,
    /// Inclusive range a:b.
    #[arg(long)]
    pub k_range: Option<String>,
}
