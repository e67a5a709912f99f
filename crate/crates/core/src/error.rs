use thiserror::Error;

/// Errors produced by the partial-matrix toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    Asymmetric { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge within {rotations} rotations")]
    InternalNumerics { rotations: usize },

    #[error("partial matrices are defined on different patterns")]
    PatternMismatch,

    #[error("vertex or position out of range: {0}")]
    InvalidIndex(String),

    #[error("partial matrix is not partial positive definite (clique {clique:?})")]
    NotPartialPd { clique: Vec<usize> },

    #[error("no positive definite completion could be reached: {0}")]
    NotCompletable(String),

    #[error("completion did not converge in {cycles} cycles (residual {residual:e})")]
    MaxCyclesExceeded { cycles: usize, residual: f64 },

    #[error("Karcher iteration did not converge in {steps} steps (gradient norm {gradient_norm:e})")]
    MaxStepsExceeded { steps: usize, gradient_norm: f64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("sample set must be non-empty")]
    EmptySampleSet,

    #[error("sweep needs at most two missing entries in total, found {0}")]
    TooManyMissing(usize),

    #[error("sweep needs at least one missing entry")]
    NothingToSweep,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("entry ({row}, {col}) is specified but its mirror is missing")]
    AsymmetricPattern { row: usize, col: usize },

    #[error("diagonal entry ({0}, {0}) is missing")]
    MissingDiagonal(usize),
}

impl Error {
    /// True for errors caused by malformed input rather than by the mathematics
    /// of the problem (used by the CLI to pick its exit code).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::AsymmetricPattern { .. }
                | Error::MissingDiagonal(_)
                | Error::Asymmetric { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidIndex(_)
                | Error::InvalidWeights(_)
                | Error::TooManyMissing(_)
                | Error::NothingToSweep
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
