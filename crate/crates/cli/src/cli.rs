use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use curved_landau::oracle::RadialScheme;
use curved_landau::{BranchChoice, RVariant, TwiceM, ZVariant};

#[derive(Debug, Parser)]
#[command(
    name = "curved-landau",
    version,
    about = "Exact Dirac spectra in a homogeneous magnetic field on the 3-sphere, with numerical cross-checks",
    args_override_self = true,
    after_help = "Exit status: 0 success, 1 verification failure, 2 usage error.\n\
                  CURVED_LANDAU_THREADS caps the number of worker threads."
)]
pub struct Cli {
    /// TOML file of flag defaults. Top-level keys apply to any command that
    /// takes that flag; tables such as [spectrum] or [verify.oracle] apply to
    /// one command. Flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate quantized states.
    ///
    /// The radial separation constant follows from termination of the radial
    /// hypergeometric series (lambda^2 = 2Bn + n^2 and its three siblings,
    /// each gated by positivity of the end-point exponents). The z problem
    /// then fixes p = lambda -/+ (N + 1/2) and the energy is
    /// eps = sqrt(M^2 + p^2).
    #[command(args_override_self = true)]
    Spectrum(SpectrumArgs),

    /// Sample the four components f1..f4 of one state on an interior grid.
    ///
    /// f1 = Z1(z) R1(r), f2 = Z2(z) R2(r), f3 = A f1, f4 = A f2 with
    /// A = (eps +/- p)/M. The full spinor is
    /// exp(-i eps t + i m phi) f / (sqrt(sin r) cos z).
    #[command(args_override_self = true)]
    Wavefunction(WavefunctionArgs),

    /// Run a verification report; exit status 1 if any check fails.
    #[command(subcommand)]
    Verify(VerifyCommand),

    /// Frame data at one point of the 3-sphere: embedding, metric, tetrad,
    /// Christoffel symbols and Ricci rotation coefficients.
    #[command(args_override_self = true)]
    Geometry(GeometryArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Residual of the four first-order component equations for every
    /// enumerated state, on a tensor grid of interior nodes. The residual is
    /// reported absolute and divided by the peak component modulus; the
    /// tolerance applies to the latter.
    #[command(args_override_self = true)]
    Residual(ResidualArgs),

    /// Finite-difference eigenvalues of the radial problem -R'' + V R =
    /// lambda^2 R and of the quadratic z pencil, compared with every
    /// closed-form tower.
    #[command(args_override_self = true)]
    Oracle(OracleArgs),

    /// p^2/rho^2 along growing curvature radii at fixed physical field b,
    /// with B = b rho^2, and the surviving radial variants.
    #[command(name = "flat-limit", args_override_self = true)]
    FlatLimit(FlatLimitArgs),
}

fn parse_twice_m(s: &str) -> Result<TwiceM, String> {
    let v: i64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    TwiceM::new(v).map_err(|e| e.to_string())
}

fn parse_r_variant(s: &str) -> Result<RVariant, String> {
    let v: u8 = s.trim().parse().map_err(|e| format!("{e}"))?;
    RVariant::from_index(v).map_err(|e| e.to_string())
}

fn parse_z_variant(s: &str) -> Result<ZVariant, String> {
    let v: u8 = s.trim().parse().map_err(|e| format!("{e}"))?;
    ZVariant::from_index(v).map_err(|e| e.to_string())
}

fn parse_branch(s: &str) -> Result<BranchChoice, String> {
    match s.trim() {
        "+" | "plus" => Ok(BranchChoice::Plus),
        "-" | "minus" => Ok(BranchChoice::Minus),
        other => Err(format!("branch must be + or -, got {other}")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Dimensionless field strength B > 0 (curvature radius 1).
    #[arg(long = "B", value_name = "B")]
    pub b: f64,

    /// Dimensionless mass M > 0.
    #[arg(long = "M", value_name = "M")]
    pub mass: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    /// Twice the azimuthal quantum number; odd. Comma-separated list.
    #[arg(long = "twice-m", required = true, action = ArgAction::Set, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_twice_m)]
    pub twice_m: Vec<TwiceM>,

    /// Largest radial index n.
    #[arg(long = "n-max", default_value_t = 3)]
    pub n_max: u32,

    /// Largest z index N.
    #[arg(long = "N-max", default_value_t = 2)]
    pub big_n_max: u32,

    /// Restrict to these radial variants (1-4).
    #[arg(long = "r-variant", action = ArgAction::Set, value_delimiter = ',', value_parser = parse_r_variant)]
    pub r_variant: Vec<RVariant>,

    /// Restrict to these z variants (3 or 4; 1 and 2 are rejected).
    #[arg(long = "z-variant", action = ArgAction::Set, value_delimiter = ',', value_parser = parse_z_variant)]
    pub z_variant: Vec<ZVariant>,

    /// Emit the + and - branch of every state.
    #[arg(long = "expand-branches")]
    pub expand_branches: bool,

    #[command(flatten)]
    pub ladder: LadderArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LadderArgs {
    /// Base cell count of the normalizability quadrature, per axis.
    #[arg(long = "norm-points", default_value_t = 128)]
    pub norm_points: usize,

    /// Dyadic refinement levels of the normalizability quadrature (>= 3).
    #[arg(long = "norm-levels", default_value_t = 4)]
    pub norm_levels: usize,
}

#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long = "twice-m", allow_negative_numbers = true, value_parser = parse_twice_m)]
    pub twice_m: TwiceM,

    #[arg(long = "r-variant", value_parser = parse_r_variant)]
    pub r_variant: RVariant,

    #[arg(long = "z-variant", value_parser = parse_z_variant)]
    pub z_variant: ZVariant,

    #[arg(long = "n")]
    pub n: u32,

    #[arg(long = "N")]
    pub big_n: u32,

    /// Branch of A = (eps +/- p)/M.
    #[arg(long, default_value = "+", allow_hyphen_values = true, value_parser = parse_branch)]
    pub branch: BranchChoice,

    /// Interior nodes along r.
    #[arg(long = "r-points", default_value_t = 64)]
    pub r_points: usize,

    /// Interior nodes along z.
    #[arg(long = "z-points", default_value_t = 64)]
    pub z_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long = "twice-m", required = true, action = ArgAction::Set, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_twice_m)]
    pub twice_m: Vec<TwiceM>,

    /// Largest radial index n.
    #[arg(long = "n-max", default_value_t = 3)]
    pub n_max: u32,

    /// Largest z index N.
    #[arg(long = "N-max", default_value_t = 2)]
    pub big_n_max: u32,

    #[arg(long = "expand-branches")]
    pub expand_branches: bool,

    /// Interior nodes along r.
    #[arg(long = "r-points", default_value_t = 100)]
    pub r_points: usize,

    /// Interior nodes along z.
    #[arg(long = "z-points", default_value_t = 100)]
    pub z_points: usize,

    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    HalfDensity,
    Clamped,
}

impl From<SchemeArg> for RadialScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::HalfDensity => RadialScheme::HalfDensity,
            SchemeArg::Clamped => RadialScheme::Clamped,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Field strength B >= 0.
    #[arg(long = "B", value_name = "B")]
    pub b: f64,

    #[arg(long = "twice-m", required = true, action = ArgAction::Set, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_twice_m)]
    pub twice_m: Vec<TwiceM>,

    /// Radial base cell count; level l uses points * 2^l cells.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,

    /// Radial refinement levels; 2 enable Richardson extrapolation, 3 an
    /// observed convergence order.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,

    /// Compare every radial eigenvalue lambda^2 up to this value.
    #[arg(long, default_value_t = 30.0)]
    pub cutoff: f64,

    #[arg(long, value_enum, default_value_t = SchemeArg::HalfDensity)]
    pub scheme: SchemeArg,

    /// Relative tolerance, |FD - exact| / max(|exact|, 1).
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,

    /// Separation constants for the z oracle. Defaults to the first three
    /// positive lambda of the radial comparison.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',')]
    pub lambda: Vec<f64>,

    /// z towers compared: N = 0..=N-max.
    #[arg(long = "N-max", default_value_t = 2)]
    pub big_n_max: u32,

    /// z base interior node count.
    #[arg(long = "z-points", default_value_t = 128)]
    pub z_points: usize,

    #[arg(long = "z-levels", default_value_t = 2)]
    pub z_levels: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FlatLimitArgs {
    /// Physical field strength b > 0; the dimensionless field is B = b rho^2.
    #[arg(long = "b", default_value_t = 1.0)]
    pub b: f64,

    #[arg(long = "twice-m", default_value = "3", allow_negative_numbers = true, value_parser = parse_twice_m)]
    pub twice_m: TwiceM,

    #[arg(long = "r-variant", default_value = "1", value_parser = parse_r_variant)]
    pub r_variant: RVariant,

    #[arg(long = "z-variant", default_value = "4", value_parser = parse_z_variant)]
    pub z_variant: ZVariant,

    #[arg(long = "n", default_value_t = 1)]
    pub n: u32,

    #[arg(long = "N", default_value_t = 0)]
    pub big_n: u32,

    /// Curvature radii, comma-separated, increasing.
    #[arg(long, action = ArgAction::Set, value_delimiter = ',', default_value = "10,100,1000")]
    pub rho: Vec<f64>,

    /// Allowed distance of the fitted convergence exponent from 1.
    #[arg(long = "rate-tolerance", default_value_t = 0.1)]
    pub rate_tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,

    #[arg(long, allow_negative_numbers = true)]
    pub z: f64,

    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
}
