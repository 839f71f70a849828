use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range (table has {len} entries)")]
    IndexOutOfRange { index: u64, len: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cell cap exceeded: {cells} cells requested, cap is {cap}")]
    CellCapExceeded { cells: u64, cap: u64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
