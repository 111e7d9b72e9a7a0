use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("abscissa {value} outside [0, {eta}]")]
    OutOfDomain { value: f64, eta: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("smallness hypotheses not satisfied: {0}")]
    HypothesesFailed(String),

    #[error("root not bracketed on [{a}, {b}] (invariant violation)")]
    BracketFailure { a: f64, b: f64 },

    #[error("verification `{name}` failed: {details}")]
    VerificationFailed { name: String, details: String },

    #[error("construction failed at level {level}, node {index}: {details}")]
    Construction {
        level: usize,
        index: usize,
        details: String,
    },

    #[error("level {level} out of range (depth {depth})")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("resolution {given} too coarse, need at most {required}")]
    ResolutionTooCoarse { given: f64, required: f64 },

    #[error("vector field undefined on a region boundary (null set)")]
    UndefinedOnNullSet,

    #[error("point outside the region for level {level}")]
    OutsideRegion { level: usize },

    #[error("solver did not converge: gap {gap} after {iterations} iterations")]
    NonConverged { gap: f64, iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
