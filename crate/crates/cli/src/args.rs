use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Rate-distortion curves for symmetrically correlated Gaussian sources.
#[derive(Debug, Parser)]
#[command(name = "symrd", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate (or best upper bound) against distortion for each subset size, with references.
    RdCurve(CurveArgs),
    /// Limiting rate gap to the centralized system as the number of sources grows.
    GapCurve(CurveArgs),
    /// Source eigenvalues and per-mode distortions at a single distortion.
    Spectrum(SpectrumArgs),
    /// Critical distortions and noise variances.
    Critical(CommonArgs),
    /// Check closed forms against dense Gaussian conditioning.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Number of sources.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Subset size; repeat or comma-separate for several.
    #[arg(long = "m", value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Pairwise correlation.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Key-value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Smallest distortion, above 0 (default 0.01).
    #[arg(long)]
    pub d_min: Option<f64>,
    /// Largest distortion, below 1 (default 0.99).
    #[arg(long)]
    pub d_max: Option<f64>,
    /// Number of grid points, at least 2.
    #[arg(long)]
    pub d_count: Option<usize>,
    /// Space the grid logarithmically.
    #[arg(long)]
    pub d_log: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Distortion.
    #[arg(long)]
    pub d: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    /// Suite to run (prop4, prop5, thm1, thm2, mmse, m1); all when absent.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Largest number of sources visited.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Largest number of sources the oracle accepts.
    #[arg(long)]
    pub oracle_cap: Option<usize>,
    /// Key-value config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}
