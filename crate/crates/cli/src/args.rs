//! Command-line surface: clap derive structs for every subcommand.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphboot::graph::WeightMode;
use graphboot::{DistanceMatrix, SampleMatrix};

use crate::io::{self, CliError};

/// Batch tool for bootstrap inference on network-indexed data.
#[derive(Debug, Parser)]
#[command(name = "graphboot", version, about, max_term_width = 100)]
pub struct Cli {
    /// Cap the worker-thread count (0 = one thread per core). Results are
    /// identical for every value.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the all-pairs shortest-path distance matrix of a network.
    Distances(DistancesArgs),
    /// Summarize neighborhood sizes at a radius (average, max, moments).
    Denseness(DensenessArgs),
    /// Kernel-weighted long-run covariance estimate with optional repair.
    Hac(HacArgs),
    /// Resample the scaled mean and invert tests into confidence sets.
    #[command(subcommand)]
    Bootstrap(BootstrapCmd),
    /// Evaluate finite-sample dependence diagnostics for a coefficient decay.
    Diagnose(DiagnoseArgs),
    /// Empirical quantiles (generalized inverse) of one column of numbers.
    Quantiles(QuantilesArgs),
    /// Draw one synthetic network and process realization from a config.
    Simulate(SimulateArgs),
    /// Monte Carlo confidence-set coverage study from a config.
    Coverage(CoverageArgs),
}

#[derive(Debug, Subcommand)]
pub enum BootstrapCmd {
    /// Neighborhood-block resampling.
    Block(BootstrapArgs),
    /// Dependent wild bootstrap with network-overlap weights.
    Dwb(BootstrapArgs),
}

/// Where the network comes from: an edge list or a precomputed matrix.
#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge-list file: one `i j [weight]` line per edge, `#` comments.
    #[arg(long, conflicts_with = "distances")]
    pub edges: Option<PathBuf>,

    /// Precomputed distance-matrix file (whitespace table, `inf` allowed).
    #[arg(long)]
    pub distances: Option<PathBuf>,

    /// Node count; defaults to the largest index in the edge list plus one.
    /// Required to represent trailing isolated nodes.
    #[arg(long)]
    pub n: Option<usize>,

    /// How edge weights become lengths: `intensity` walks 1/weight per
    /// edge, `unit` requires every weight to be 1.
    #[arg(long, value_enum, default_value_t = WeightsArg::Intensity)]
    pub weights: WeightsArg,
}

impl GraphInput {
    pub fn load(&self) -> Result<DistanceMatrix, CliError> {
        io::load_distances(
            self.edges.as_ref(),
            self.distances.as_ref(),
            self.n,
            self.weights.into(),
        )
    }
}

/// Observations file shared by the estimation subcommands.
#[derive(Debug, Args)]
pub struct DataInput {
    /// CSV of observations: one row per node, one column per coordinate.
    #[arg(long)]
    pub data: PathBuf,

    /// Skip one header line at the top of the data file.
    #[arg(long)]
    pub header: bool,
}

impl DataInput {
    pub fn load(&self) -> Result<SampleMatrix, CliError> {
        io::load_data(&self.data, self.header)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsArg {
    Unit,
    Intensity,
}

impl From<WeightsArg> for WeightMode {
    fn from(w: WeightsArg) -> Self {
        match w {
            WeightsArg::Unit => WeightMode::Unit,
            WeightsArg::Intensity => WeightMode::Intensity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Block,
    Dwb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    /// Treat coefficients past the supplied list as exactly zero.
    Zero,
    /// Error when a network class lies past the supplied list.
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightNormArg {
    /// Third absolute moment of a centered Gaussian with the overlap
    /// weight's own variance.
    Gaussian,
    /// All multiplier norms set to one.
    Unit,
}

#[derive(Debug, Args)]
pub struct DistancesArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    /// Write the matrix to a file and print a JSON summary instead.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensenessArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    /// Neighborhood radius (open balls use distance strictly below this).
    #[arg(long)]
    pub s: f64,

    /// Moment order for the central neighborhood-size moment.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Args)]
pub struct HacArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    #[command(flatten)]
    pub data: DataInput,

    /// Kernel: truncated, bartlett, or parzen.
    #[arg(long, default_value = "bartlett")]
    pub kernel: String,

    /// Bandwidth; pair (i,j) enters at argument distance/(bandwidth+1).
    #[arg(long)]
    pub bandwidth: f64,

    /// Also report the eigenvalue-floored positive-definite repair.
    #[arg(long)]
    pub repair: bool,

    /// Eigenvalue floor for --repair (defaults to a data-driven value).
    #[arg(long, requires = "repair")]
    pub floor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    #[command(flatten)]
    pub data: DataInput,

    /// Block/coupling radius: nodes strictly closer than this co-move.
    #[arg(long)]
    pub radius: f64,

    /// Number of bootstrap replicates.
    #[arg(long, default_value_t = 399)]
    pub reps: usize,

    /// RNG seed; required (runs must be reproducible, no wall-clock).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Smooth transform of the mean: identity, l2norm (squared Euclidean
    /// norm), or a polynomial `poly:c:e1,..;c:e1,..` — one coefficient and
    /// one exponent per coordinate per term (poly:1:2,0;-0.5:1,1 is
    /// x² − 0.5·x·y).
    #[arg(long)]
    pub phi: Option<String>,

    /// Comma-separated miscoverage levels for the confidence sets.
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub alphas: Vec<f64>,

    /// Write raw replicate statistics to a headerless CSV (t1[,t2]).
    #[arg(long)]
    pub dump_replicates: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub graph: GraphInput,

    /// Bandwidth/block radius the conditions are evaluated at.
    #[arg(long)]
    pub radius: f64,

    /// Comma-separated dependence coefficients for distances 1,2,3,...
    /// (the distance-0 coefficient is fixed at 1).
    #[arg(long, value_delimiter = ',', required = true)]
    pub gamma: Vec<f64>,

    /// What to assume past the last supplied coefficient.
    #[arg(long, value_enum, default_value_t = TailArg::Reject)]
    pub gamma_tail: TailArg,

    /// Moment order r > 2 entering the variance-condition exponents.
    #[arg(long, default_value_t = 4.0)]
    pub r: f64,

    /// Moment order p > 2 entering the local-condition exponents.
    #[arg(long, default_value_t = 4.0)]
    pub p: f64,

    /// Multiplier third-moment profile for the wild-weight diagnostic.
    #[arg(long, value_enum, default_value_t = WeightNormArg::Gaussian)]
    pub weight_norm: WeightNormArg,

    /// Smoothness order of a transform; adds the dependence-decay
    /// transfer rate (p - tau)/(p + tau - 2) to the report.
    #[arg(long)]
    pub tau: Option<f64>,

    /// The transform's fourth-order remainder vanishes, improving the
    /// transfer rate to (p - tau)/(p - 1).
    #[arg(long, requires = "tau")]
    pub c4_zero: bool,
}

#[derive(Debug, Args)]
pub struct QuantilesArgs {
    /// CSV file of numbers.
    #[arg(long)]
    pub data: PathBuf,

    /// Zero-based column to read.
    #[arg(long, default_value_t = 0)]
    pub column: usize,

    /// Skip one header line.
    #[arg(long)]
    pub header: bool,

    /// Comma-separated probability levels; each reports the smallest
    /// value whose empirical CDF reaches the level.
    #[arg(long, value_delimiter = ',', default_value = "0.9")]
    pub alphas: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML or JSON design file: network kind, process kind, node count.
    #[arg(long)]
    pub config: PathBuf,

    /// RNG seed; overrides a `seed` entry in the config.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Also write the drawn network as an edge-list file.
    #[arg(long)]
    pub out_edges: Option<PathBuf>,

    /// Also write the drawn observations as a one-column CSV.
    #[arg(long)]
    pub out_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    /// TOML or JSON design file: network kind, process kind, node count.
    #[arg(long)]
    pub config: PathBuf,

    /// Resampling scheme under study.
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,

    /// Block/coupling radius passed to every bootstrap run.
    #[arg(long)]
    pub radius: f64,

    /// Bootstrap replicates per Monte Carlo repetition.
    #[arg(long, default_value_t = 399)]
    pub reps: usize,

    /// Nominal miscoverage level of the interval under study.
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,

    /// Monte Carlo repetitions (fresh data each time).
    #[arg(long, default_value_t = 1000)]
    pub mc: usize,

    /// RNG seed; overrides a `seed` entry in the config.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Write one `rep,covered,sigma_star,radius` CSV row per repetition.
    #[arg(long)]
    pub records: Option<PathBuf>,
}
