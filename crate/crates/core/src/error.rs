use thiserror::Error;

/// Errors produced by the gasket numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SgError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An eigenvalue in the sequence hit one of the excluded values {2, 5, 6}
    /// (or a matrix pole) at the given level.
    #[error("singular eigenvalue {value} at level {level}: {reason}")]
    Singular {
        level: usize,
        value: f64,
        reason: &'static str,
    },

    /// `A_i(λ)` has a pole at `λ ∈ {2, 5}`.
    #[error("eigen extension matrix is singular at λ = {0}")]
    SingularMatrix(f64),

    /// A requested level exceeds a hard cap.
    #[error("level {requested} exceeds the cap of {cap} ({what})")]
    LevelCap {
        requested: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("level mismatch: expected level {expected}, got {actual}")]
    LevelMismatch { expected: usize, actual: usize },

    #[error("no convergence after {iterations} iterations ({what})")]
    NonConvergence { iterations: usize, what: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = SgError> = std::result::Result<T, E>;
