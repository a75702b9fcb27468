use std::io;
use thiserror::Error;

/// Crate-wide error type.
///
/// Precondition violations on in-memory calls (negative tolerances,
/// out-of-range cell indices, mismatched slice lengths) panic instead;
/// this type is for data that arrives from outside: files that do not
/// parse, grids that do not line up, datasets an operation cannot use.
#[derive(Debug, Error)]
pub enum Error {
    /// A geometry failed its construction invariants.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// A file exists but its content is not valid for the expected format.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    /// Two grids that must share a spec do not.
    #[error("grid specs are not aligned: {0}")]
    Misaligned(String),

    /// The input data cannot support the requested operation.
    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
