use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ill-posed continuation: |xi*dy| = {exponent:.3} exceeds guard at xi = {frequency}")]
    IllPosedContinuation { frequency: f64, exponent: f64 },

    #[error("admissibility: |f| = {modulus:.3e} on line Im z = {line} near x = {x}")]
    Admissibility { line: f64, x: f64, modulus: f64 },

    #[error("pole: evaluation within tolerance of the pole at {nearest}")]
    Pole { nearest: Complex64 },

    #[error("domain exclusion: {point} lies within {radius:e} of a catalog singularity")]
    DomainExclusion { point: Complex64, radius: f64 },

    #[error("domain: {0}")]
    Domain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-convergence: {0}")]
    NonConvergence(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
