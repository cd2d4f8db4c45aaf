use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hullwalk",
    version,
    about = "Faces and absorption of convex hulls of random walks and bridges"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for simulation and chamber enumeration
    /// (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Relative feasibility tolerance of the geometric predicates.
    #[arg(long, global = true, default_value_t = hullwalk::geometry::DEFAULT_EPS)]
    pub eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact expected face counts of a symmetric walk hull.
    Exact(ExactArgs),
    /// Exact probability that selected points span a face.
    Faceprob(FaceprobArgs),
    /// Exact probability that a joint hull of walks and bridges contains the
    /// origin.
    Absorb(AbsorbArgs),
    /// Compare a Monte Carlo estimate with the exact value.
    Simulate(SimulateArgs),
    /// Check region and chamber intersection counts of a reflection
    /// arrangement.
    Chambers(ChambersArgs),
    /// Verify the exact identities over a range of parameters.
    IdentityCheck(IdentityArgs),
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Walk lengths: comma-separated values or inclusive ranges such as 1-10.
    #[arg(long)]
    pub n: String,
    /// Dimensions, in the same notation as --n.
    #[arg(long)]
    pub d: String,
    /// Face dimension; all k < d when omitted.
    #[arg(long, conflicts_with = "total")]
    pub k: Option<usize>,
    /// Report the expected number of faces of all dimensions together.
    #[arg(long)]
    pub total: bool,
}

#[derive(Debug, Args)]
pub struct PathKind {
    /// Symmetric walk of n steps, points S_0..S_n (default).
    #[arg(long, conflicts_with = "bridge")]
    pub walk: bool,
    /// Bridge of n steps, points S_0..S_{n-1}.
    #[arg(long)]
    pub bridge: bool,
}

#[derive(Debug, Args)]
pub struct FaceprobArgs {
    #[command(flatten)]
    pub kind: PathKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Strictly increasing point indices, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub indices: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct AbsorbArgs {
    #[arg(long)]
    pub d: usize,
    /// Walk lengths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub walks: Vec<usize>,
    /// Bridge lengths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub bridges: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    FaceProb,
    ExpectedFaces,
    Absorption,
    ShiftAverage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cyclic,
    Windowed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Law {
    /// Standard Gaussian increments.
    Symmetric,
    /// Increments 1 + t * standard Gaussian.
    Nonsymmetric,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[command(flatten)]
    pub kind: PathKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub walks: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub bridges: Vec<usize>,
    /// Lags l_1 < ... < l_k of the shifted face pattern, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub lags: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Cyclic)]
    pub mode: Mode,
    /// Increment law of the walk for shift averages.
    #[arg(long, value_enum, default_value_t = Law::Symmetric)]
    pub law: Law,
    /// Noise scale of the nonsymmetric law.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, env = "HULLWALK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Pass threshold on |z|.
    #[arg(long, default_value_t = hullwalk::montecarlo::Z_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct ChambersArgs {
    /// Type B block sizes, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<usize>,
    /// Type A block sizes (number of coordinates), comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<usize>,
    /// Dimension of the sampled increments; the subspace has codimension
    /// d plus the number of A-blocks.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "HULLWALK_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    #[arg(long, default_value_t = 4)]
    pub max_d: usize,
    /// Add one to the Stirling number c(n, m) used by the closed form.
    #[arg(long, hide = true, value_delimiter = ',', value_name = "N,M")]
    pub corrupt_stirling: Option<Vec<usize>>,
}
