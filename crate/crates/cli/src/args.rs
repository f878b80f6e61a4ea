use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "riwgm", version, about = "Graphical model selection with the regularized inverse-Wishart prior")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate data and ground truth.
    Simulate(SimulateArgs),
    /// Run the Gibbs sampler on a data CSV.
    Fit(FitArgs),
    /// Trace the selection path from a fitted chain.
    Select(SelectArgs),
    /// Pick a point estimate by Bayesian FDR.
    Fdr(FdrArgs),
    /// Score estimates against a known truth.
    Evaluate(EvaluateArgs),
    /// Run the fractional-Gaussian-noise benchmark.
    Bench(BenchArgs),
}

/// Output directory; defaults to `$RIWGM_OUTPUT_ROOT/<command>`.
#[derive(Debug, Args)]
pub struct OutArg {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimCase {
    Fgn,
    Sparse,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "fgn")]
    pub case: SimCase,
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub p: usize,
    #[arg(long, default_value_t = 0.7)]
    pub hurst: f64,
    /// Hub count for the sparse case.
    #[arg(long, default_value_t = 0)]
    pub hubs: usize,
    /// Minimum hub degree for the sparse case; defaults to `p / 4`.
    #[arg(long)]
    pub hub_degree: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Partial-correlation thresholds for the true edge lists.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.005])]
    pub thresholds: Vec<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PriorArg {
    Riw,
    Iw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConditionalDArg {
    PaperIg,
    ExactGig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LambdaShapeArg {
    Paper,
    Derived,
    FullConditional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    And,
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FdrRuleArg {
    Complemented,
    Direct,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Data matrix CSV (rows are observations, no header).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long, value_enum)]
    pub prior: Option<PriorArg>,
    #[arg(long, value_enum)]
    pub conditional_d: Option<ConditionalDArg>,
    #[arg(long, value_enum)]
    pub lambda_shape: Option<LambdaShapeArg>,
    #[arg(long)]
    pub store_draws: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Directory written by `fit`.
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long)]
    pub delta_count: Option<usize>,
    /// Smallest positive grid value as a fraction of the largest.
    #[arg(long, default_value_t = 1e-4)]
    pub lower_ratio: f64,
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct FdrArgs {
    /// Directory written by `select`.
    #[arg(long)]
    pub path: PathBuf,
    /// Directory written by `fit`; supplies the posterior mean to mask.
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, value_enum, default_value = "complemented")]
    pub fdr_rule: FdrRuleArg,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// True edge list (`i,j`, 1-based).
    #[arg(long, conflicts_with = "truth_precision")]
    pub truth: Option<PathBuf>,
    /// True precision matrix; edges are thresholded at `--threshold`.
    #[arg(long)]
    pub truth_precision: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    /// Estimated edge list, e.g. `edges.csv` from `fdr`.
    #[arg(long)]
    pub estimate: Option<PathBuf>,
    /// Directory written by `select`, for ROC output.
    #[arg(long)]
    pub path: Option<PathBuf>,
    /// Chain directory and data CSV, for BIC along the path.
    #[arg(long, requires_all = ["path", "data"])]
    pub chain: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Report nodes of the estimate with more neighbours than this.
    #[arg(long)]
    pub hub_threshold: Option<usize>,
    /// Node count, needed when no path or precision matrix is given.
    #[arg(long)]
    pub p: Option<usize>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub p: usize,
    #[arg(long, default_value_t = 0.7)]
    pub hurst: f64,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 15_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 5_000)]
    pub burnin: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    #[arg(long, default_value_t = 0.2)]
    pub eta: f64,
    #[arg(long, value_enum, default_value = "and")]
    pub rule: RuleArg,
    #[arg(long, value_enum, default_value = "paper-ig")]
    pub conditional_d: ConditionalDArg,
    #[arg(long, value_enum, default_value = "paper")]
    pub lambda_shape: LambdaShapeArg,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [PriorArg::Riw, PriorArg::Iw])]
    pub methods: Vec<PriorArg>,
    #[command(flatten)]
    pub out: OutArg,
}
