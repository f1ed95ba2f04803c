use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bellwave",
    version,
    about = "Bell-CHSH spin correlations for a singlet pair of Dirac wavepackets"
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags accepted by every subcommand, before or after its name.
#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    /// Normalized separation ζ = Z/d.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub zeta: Option<f64>,
    /// Normalized momentum κ = P·d.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Packet width d in Compton wavelengths (default 1000).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Central momentum P in units of mc.
    #[arg(long = "P", global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Detector distance Z in Compton wavelengths.
    #[arg(long = "Z", global = true, allow_negative_numbers = true)]
    pub z: Option<f64>,
    /// Accept P above the non-relativistic limit.
    #[arg(long, global = true)]
    pub allow_relativistic: bool,
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, global = true, value_enum)]
    pub spin_mode: Option<SpinModeArg>,
    /// Initial Gauss-Hermite nodes per axis.
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,
    /// Relative tolerance between successive node doublings.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
    /// Largest node count per axis before giving up.
    #[arg(long, global = true)]
    pub quad_max_nodes: Option<usize>,
    /// Transverse detector window.
    #[arg(long, global = true, value_enum)]
    pub window: Option<WindowArg>,
    /// Gaussian window width in units of d.
    #[arg(long, global = true)]
    pub window_width: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "BELLWAVE_JOBS")]
    pub jobs: Option<usize>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpinModeArg {
    Leading,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Uniform,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One correlator C(a,b), or B with --bell.
    Point(PointArgs),
    /// |B| over a ζ grid for several κ.
    Sweep(SweepArgs),
    /// CHSH value with its four correlators, or the classical crossing.
    Chsh(ChshArgs),
    /// Compare the quadrature oracle with the closed form.
    Validate(ValidateArgs),
    /// Two-curve |B(ζ)| plot as CSV plus SVG.
    Figure1(Figure1Args),
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// First analyzer direction x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Second analyzer direction x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Evaluate the CHSH combination instead of one correlator.
    #[arg(long)]
    pub bell: bool,
    /// `default` or a=x,y,z,a2=x,y,z,b=x,y,z,b2=x,y,z.
    #[arg(long, allow_hyphen_values = true)]
    pub settings: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated κ values.
    #[arg(long)]
    pub kappas: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub zeta_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub zeta_max: f64,
    #[arg(long, default_value_t = 501)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
    pub spacing: SpacingArg,
    #[arg(long, allow_hyphen_values = true)]
    pub settings: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ChshArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub settings: Option<String>,
    /// Locate every ζ where |B| crosses 2 for the given κ.
    #[arg(long)]
    pub find_crossing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Absolute tolerance on |numeric − closed|.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub kappas: Option<String>,
    #[arg(long)]
    pub zetas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub settings: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Figure1Args {
    #[arg(long)]
    pub kappas: Option<String>,
    #[arg(long, default_value_t = 5.0)]
    pub zeta_max: f64,
    #[arg(long, default_value_t = 501)]
    pub count: usize,
    /// SVG path; defaults to the output path with an .svg extension.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}
