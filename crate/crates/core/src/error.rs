use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer s = {0}")]
    GammaPole(Complex64),

    #[error("zeta pole at s = 1")]
    ZetaPole,

    #[error("completed zeta pole at s = {0}")]
    LambdaPole(Complex64),

    #[error("contour of radius {radius} around {anchor} comes too close to the singularity at {pole}")]
    ContourRadius {
        anchor: Complex64,
        pole: Complex64,
        radius: f64,
    },

    #[error("point evaluation within {dist:.3e} of the pole at {pole}; use jet mode")]
    NearPole { pole: Complex64, dist: f64 },

    #[error("Eisenstein series pole at s = {0} for the requested variant")]
    EisensteinPole(Complex64),

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("declared exponent profile mismatch: |a(T) - f(T)| = {defect:.3e} at T = {t}")]
    ProfileMismatch { t: f64, defect: f64 },

    #[error("exponent with real part 1/2 but alpha != 1/2; residue subtraction is ambiguous")]
    ExponentOnCriticalBoundary,

    #[error("input matrix is not unimodular (det = {0})")]
    NonUnimodular(String),

    #[error("enumeration radius insufficient: tail bound {tail:.3e} exceeds budget {budget:.3e}")]
    RadiusInsufficient { tail: f64, budget: f64 },

    #[error("ramified multiplicative characters are not supported")]
    RamifiedCharacter,

    #[error("Mellin evaluation outside the convergence band: Re s = {re_s}, band ({lo}, {hi})")]
    BandViolation { re_s: f64, lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
