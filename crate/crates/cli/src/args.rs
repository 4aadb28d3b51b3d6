use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entopo::state::{DEFAULT_CONCURRENCE_TOL, DEFAULT_POSITIVITY_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "entopo",
    version,
    about = "Two-qubit state space geometry and entanglement evolution topology"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// JSON object of flag values (keys are long flag names); command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo radial profile and volumes of the physical and separable sets.
    Volumes(VolumesArgs),
    /// Concurrence histogram on a sphere of fixed radius.
    Histogram(HistogramArgs),
    /// Grid over a two-dimensional coordinate section.
    Section(SectionArgs),
    /// Disc/square type of every coordinate section.
    Table1(Common),
    /// Sample a model trajectory and classify it.
    Trajectory(TrajectoryArgs),
    /// Classify a trajectory read from CSV (t, n_1..n_15, C).
    Classify(ClassifyArgs),
    /// Scan a model parameter and bracket category changes.
    Critical(CriticalArgs),
    /// Concurrence and positivity of a single state.
    Concurrence(ConcurrenceArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Output base path; writes BASE.csv and/or BASE.json. Without it the
    /// primary output goes to stdout.
    #[arg(short, long, value_name = "BASE")]
    pub out: Option<PathBuf>,

    /// Format written to stdout when --out is absent [default: csv, json for classify].
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Positivity tolerance on a2, a3, a4.
    #[arg(long, default_value_t = DEFAULT_POSITIVITY_TOL)]
    pub tol: f64,

    /// Tolerance below which a concurrence counts as zero.
    #[arg(long = "tol-c", default_value_t = DEFAULT_CONCURRENCE_TOL)]
    pub tol_c: f64,
}

#[derive(Clone, Debug, Args)]
pub struct SeedArg {
    /// RNG seed.
    #[arg(long, env = "ENTOPO_SEED", default_value_t = 7)]
    pub seed: u64,
}

#[derive(Clone, Debug, Args)]
pub struct VolumesArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Samples per radius.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Number of radial intervals K on [0, √3] (even).
    #[arg(long = "radial-steps", default_value_t = 50)]
    pub radial_steps: usize,
}

#[derive(Clone, Debug, Args)]
pub struct HistogramArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Sphere radius in (0, √3]; √3 samples pure states.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
}

#[derive(Clone, Debug, Args)]
pub struct SectionArgs {
    #[command(flatten)]
    pub common: Common,
    /// First generator label (e.g. XX).
    #[arg(long)]
    pub i: String,
    /// Second generator label.
    #[arg(long)]
    pub j: String,
    /// Grid points per axis on [-1, 1].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    D3,
    Ye,
    Zj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DephasingArg {
    Rtn,
    Exp,
}

/// Model parameters; unset flags keep the model defaults.
#[derive(Clone, Debug, Default, Args)]
pub struct ModelArgs {
    /// RTN coupling g (d3, zj).
    #[arg(long)]
    pub g: Option<f64>,
    /// RTN switching rate γ (d3, zj).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Field B₀ (d3, zj).
    #[arg(long = "B0")]
    pub b0: Option<f64>,
    /// Initial effective Bloch vector components (d3).
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub y0: Option<f64>,
    #[arg(long)]
    pub z0: Option<f64>,
    /// Emission rate Γ (ye).
    #[arg(long = "Gamma")]
    pub big_gamma: Option<f64>,
    /// Initial-state parameter a₀ ∈ [0, 1] (ye).
    #[arg(long)]
    pub a0: Option<f64>,
    /// Werner weight r (zj).
    #[arg(long)]
    pub r: Option<f64>,
    /// Bell-state phase φ (zj).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Relaxation rate Γ₁ (zj).
    #[arg(long = "Gamma1")]
    pub gamma1: Option<f64>,
    /// Exponential dephasing rate Γ₂ (zj); implies --dephasing exp.
    #[arg(long = "Gamma2")]
    pub gamma2: Option<f64>,
    /// Werner family (zj).
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Dephasing function (zj).
    #[arg(long, value_enum)]
    pub dephasing: Option<DephasingArg>,
}

#[derive(Clone, Debug, Args)]
pub struct TimeArgs {
    /// End of the time grid (default: the model's horizon).
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Time step; overrides --samples.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of sample times (default: the model's choice).
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(value_enum)]
    pub model: ModelName,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub params: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Clone, Debug, Args)]
pub struct ClassifyArgs {
    /// Trajectory CSV with columns t, n_1..n_15, C ('#' lines are skipped).
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
    /// Limiting state as 15 comma-separated components.
    #[arg(long = "n-inf", value_delimiter = ',', allow_negative_numbers = true)]
    pub n_inf: Option<Vec<f64>>,
    /// Take n_∞ and subspace metadata from a model with the given parameters.
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
    #[command(flatten)]
    pub params: ModelArgs,
}

#[derive(Clone, Debug, Args)]
pub struct CriticalArgs {
    #[arg(value_enum)]
    pub model: ModelName,
    /// Parameter to scan (e.g. a0, gamma, Gamma1).
    pub parameter: String,
    #[arg(allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(allow_negative_numbers = true)]
    pub hi: f64,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub params: ModelArgs,
    /// Equally spaced scan points before bisection.
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
}

#[derive(Clone, Debug, Args)]
pub struct ConcurrenceArgs {
    #[command(flatten)]
    pub common: Common,
    /// State file: {"n": [15 reals]} or {"rho_re": [[..]], "rho_im": [[..]]}.
    #[arg(long, conflicts_with = "n")]
    pub state: Option<PathBuf>,
    /// Polarization vector as 15 comma-separated components.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub n: Option<Vec<f64>>,
}
