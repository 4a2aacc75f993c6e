//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_DIM: usize = 1024;
pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_NORM_MAX_ITER: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "toeplitz-dyn",
    version,
    about = "Hypercyclicity, spectra and orbits of banded Toeplitz operators on H²"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide hypercyclicity; the exit code encodes the verdict.
    Classify(ClassifyArgs),
    /// Spectrum raster by winding numbers and its connected components.
    Spectrum(SpectrumArgs),
    /// Winding number of the symbol curve about a point.
    Winding(PointArgs),
    /// Closed-form eigenvector and its residual against the finite section.
    Eigen(EigenArgs),
    /// Norms of the orbit of a vector under the finite section.
    Orbit(OrbitArgs),
    /// Godefroy-Shapiro witness built from eigenvectors.
    Witness(WitnessArgs),
    /// Power-iteration estimate of the finite-section norm.
    Norm(NormArgs),
    /// Geometry of the ellipse traced by a tridiagonal symbol.
    Ellipse(EllipseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Tridiagonal symbol `a,b,c` for a/z + b + cz; each part is `re` or `re:im`.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "coeffs",
        required_unless_present = "coeffs"
    )]
    pub tri: Option<String>,
    /// Symbol as inline JSON or a path to a JSON file: `{"-1":[re,im],...}`,
    /// `{"coeffs":[{"n":..,"re":..,"im":..}]}` or `{"a":[re,im],"b":..,"c":..}`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// Dimension of the finite section.
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub dim: usize,
    /// Raster resolution per axis.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Width of the band around strict thresholds.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Number of iterations (orbit, witness).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Seed for every random draw.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the primary output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Probe resolution per axis for the adjoint-eigenvalue obstruction.
    #[arg(long, default_value_t = 64)]
    pub probe_grid: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Relative margin added around the curve's bounding box.
    #[arg(long, default_value_t = 0.1)]
    pub margin: f64,
    /// Also write the raster CSV here when the primary format is JSON.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: Common,
    /// Point `re,im` or `re:im`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("param").required(true).multiple(false)))]
pub struct EigenArgs {
    #[command(flatten)]
    pub common: Common,
    /// Annulus parameter of a tridiagonal eigenvector.
    #[arg(long, allow_hyphen_values = true, group = "param")]
    pub z0: Option<String>,
    /// Kernel point of an anti-analytic eigenvector.
    #[arg(long, allow_hyphen_values = true, group = "param")]
    pub lambda: Option<String>,
    /// Target eigenvalue of a tridiagonal symbol; the parameter is solved for.
    #[arg(long, allow_hyphen_values = true, group = "param")]
    pub mu: Option<String>,
    /// Number of leading coefficients in the JSON output (0 for all).
    #[arg(long, default_value_t = 16)]
    pub head: usize,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub common: Common,
    /// Start vector: `eK`, a JSON array of `[re,im]` pairs, or a JSON file.
    #[arg(long, default_value = "e0")]
    pub x: String,
    /// Store `T^k x` whenever `k` is a multiple of this (0 for never).
    #[arg(long, default_value_t = 0)]
    pub every: usize,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub common: Common,
    /// Eigen parameter with eigenvalue inside the unit disc (repeatable).
    #[arg(long, allow_hyphen_values = true, requires = "large")]
    pub small: Vec<String>,
    /// Eigen parameter with eigenvalue outside the closed disc (repeatable).
    #[arg(long, allow_hyphen_values = true, requires = "small")]
    pub large: Vec<String>,
    /// Start target of the transitivity demo.
    #[arg(long, default_value = "e0")]
    pub x: String,
    /// End target of the transitivity demo.
    #[arg(long, default_value = "e0")]
    pub y: String,
    /// Eigenvectors sampled on each side of the circle in the demo.
    #[arg(long, default_value_t = 12)]
    pub samples: usize,
    /// Target accuracy of the demo.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Distance of sampled eigenvalues from the unit circle in the demo.
    #[arg(long, default_value_t = 0.25)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = DEFAULT_NORM_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct EllipseArgs {
    #[command(flatten)]
    pub common: Common,
    /// Optional point to locate against the ellipse.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}
