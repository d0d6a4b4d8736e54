use thiserror::Error;

/// Errors raised by the geometric constructions and their verification oracles.
#[derive(Debug, Error)]
pub enum GeomError {
    /// `horizontal_part` was asked to decompose at a null basepoint.
    #[error("null basepoint: <z, z> = 0")]
    NullBasepoint,

    #[error("zero representative for a projective point")]
    ZeroRepresentative,

    /// No positive sigma solves the level equation for this |w|.
    #[error("outside model domain: {0}")]
    OutsideModelDomain(String),

    /// The embedding fails to be an immersion at the requested point.
    #[error("not an immersion here (rho^2 = {rho_sq:.3e})")]
    NotImmersed { rho_sq: f64 },

    /// The base curve is degenerate at this parameter value.
    #[error("not an immersed curve (rho^2 factor = {factor:.3e} at s = {s})")]
    DegenerateCurve { s: f64, factor: f64 },

    #[error("parameter a = {a} outside legal range {range} for {family}")]
    ParamRange {
        family: &'static str,
        a: f64,
        range: &'static str,
    },

    /// beta^2 + c is too close to zero for a ratio check to make sense.
    #[error("degenerate ratio: |beta^2 + c| = {value:.3e} is below 1e-12")]
    DegenerateRatio { value: f64 },

    /// beta^2 + c changed sign over a sample that should be sign-definite.
    #[error("dichotomy violated: beta^2 + c changes sign on the sample")]
    MixedSigns,

    #[error("empty sample")]
    EmptySample,

    #[error("finite-difference step {step:.3e} outside usable range [{lo:.1e}, {hi:.1e}]")]
    FdStep { step: f64, lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
