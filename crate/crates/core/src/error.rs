use thiserror::Error;

#[derive(Debug, Error)]
pub enum Wp4Error {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("frequency grids differ")]
    GridMismatch,
    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("search failed: {0}")]
    Search(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Wp4Error>;
