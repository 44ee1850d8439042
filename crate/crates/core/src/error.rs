use std::path::PathBuf;

/// Errors produced by the factorizations, kernels and file readers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("{routine} did not converge within {sweeps} sweeps")]
    NoConvergence {
        routine: &'static str,
        sweeps: usize,
    },

    #[error("matrix is not positive definite (pivot {pivot} is {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("triangular factor is singular at diagonal entry {index}")]
    SingularMatrix { index: usize },

    /// Squared A-norm of the projected column was non-positive or non-finite.
    /// `column` is zero-based.
    #[error("Gram-Schmidt breakdown at column {column}: squared A-norm {value:e} is not positive")]
    Breakdown { column: usize, value: f64 },

    #[error("matrix is rank deficient (smallest singular value is zero)")]
    RankDeficient,

    #[error("target condition number {target:e} is infeasible (minimum reachable is {floor:e})")]
    InfeasibleTarget { target: f64, floor: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_err(expected: impl ToString, found: impl ToString) -> Error {
    Error::Dimension {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
