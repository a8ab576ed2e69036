use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for a polynomial in {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("root finder did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid polynomial literal: {0}")]
    PolyLiteral(String),

    #[error("invalid rational inner function: {0}")]
    InvalidFunction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("too many skipped fibers: {skipped} of {total} exceed the allowed fraction {max_fraction}")]
    TooManySkipped {
        skipped: usize,
        total: usize,
        max_fraction: f64,
    },

    #[error("Gram matrix is not positive semidefinite (min eigenvalue {min_eig:.3e}, max {max_eig:.3e})")]
    GramNotPsd { min_eig: f64, max_eig: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
