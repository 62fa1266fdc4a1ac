use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minfx_sim::{AltShape, RiskEstimator};

#[derive(Debug, Parser)]
#[command(
    name = "minfx",
    version,
    about = "Minimum-location estimation and rescaled outlier selection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the location of the null component from a sample.
    Estimate(EstimateArgs),
    /// Select outliers by Benjamini-Hochberg on rescaled p-values.
    Select(SelectArgs),
    /// Run a Monte Carlo experiment and write its report.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimateMethod {
    Median,
    Min,
    Quantile,
    Cheb,
    AdaptiveGosc,
    AdaptiveOsc,
    UnknownVariance,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Whitespace-separated numbers, or '-' for standard input.
    #[arg(default_value = "-")]
    pub input: String,
    #[arg(long, value_enum)]
    pub method: EstimateMethod,
    /// Order for `quantile` (1-based) or even degree for `cheb`.
    #[arg(long)]
    pub q: Option<i64>,
    /// Sparsity for `unknown-variance`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Lepski constant for `adaptive-osc`.
    #[arg(long, default_value_t = 2.0)]
    pub c0: f64,
    /// Evaluate `cheb` even outside its admissible degree range.
    #[arg(long)]
    pub unrestricted: bool,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Whitespace-separated numbers, or '-' for standard input.
    #[arg(default_value = "-")]
    pub input: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Upper bound on the number of outliers used by the scale estimate.
    #[arg(long)]
    pub k0: usize,
    /// File with one set of 0-based indices per line; prints a false
    /// discovery proportion bound for each.
    #[arg(long)]
    pub posthoc: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Fdr,
    Roc,
    Posthoc,
    Risk,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fdr => "fdr",
            Experiment::Roc => "roc",
            Experiment::Posthoc => "posthoc",
            Experiment::Risk => "risk",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub experiment: Experiment,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Master seed; the MINFX_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Level for fdr / posthoc.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated levels for roc.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub k_frac: Option<f64>,
    #[arg(long, value_parser = parse_shape)]
    pub shape: Option<AltShape>,
    /// Largest set size for posthoc.
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Comma-separated sample sizes for risk.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    /// Comma-separated sparsities for risk.
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    /// Comma-separated estimators for risk.
    #[arg(long, value_delimiter = ',', value_parser = parse_estimator)]
    pub estimators: Option<Vec<RiskEstimator>>,
    /// Shift of the contaminated coordinates for risk.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    /// n = 10^6 and 100 replications for fdr / roc.
    #[arg(long)]
    pub full_scale: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write an SVG figure.
    #[arg(long)]
    pub plot: bool,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

fn parse_shape(s: &str) -> Result<AltShape, String> {
    s.parse()
}

fn parse_estimator(s: &str) -> Result<RiskEstimator, String> {
    s.parse()
}
