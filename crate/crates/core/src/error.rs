use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
///
/// Dimension mismatches inside the arithmetic kernels panic (they are
/// programming errors); everything a caller can trigger with data or
/// configuration comes back through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invariant violated at trial {trial}: {message} (state digest {digest:016x})")]
    InvariantViolation {
        trial: usize,
        message: String,
        digest: u64,
    },

    #[error("noise schedule queried out of order: expected t = {expected}, got t = {got}")]
    OutOfOrder { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
