use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("m must be half-integer: twice_m = {0} is even")]
    EvenTwiceM(i64),

    #[error("frame is singular at this point: {factor} vanishes")]
    SingularFrame { factor: &'static str },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("evanescent energy: |eps| = {eps} is below the mass {mass}")]
    Evanescent { eps: f64, mass: f64 },

    #[error("hypergeometric series does not terminate (alpha = {alpha}, beta = {beta})")]
    NonTerminating { alpha: f64, beta: f64 },

    #[error("hypergeometric lower parameter gamma = {gamma} hits a pole before degree {degree}")]
    GammaPole { gamma: f64, degree: u32 },

    #[error("inconsistent quantum numbers: {0}")]
    Inconsistent(String),

    #[error("radial variant {variant} is not admissible: violates {violated}")]
    Inadmissible { variant: u8, violated: String },

    #[error("lambda^2 = {value} is not positive: requires {inequality}")]
    NonPositiveLambdaSquared { inequality: &'static str, value: f64 },

    #[error("degenerate separation: {0}")]
    Degenerate(String),

    #[error("z-variant 3 tower exhausted: p = {p} is not positive")]
    OutOfTower { p: f64 },

    #[error("z-variant {0} is rejected: it quantizes lambda instead of p")]
    RejectedVariant(u8),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("no converged real eigenvalues: {0}")]
    NoRealEigenvalues(String),

    #[error("internal error: {0}")]
    Internal(String),
}
