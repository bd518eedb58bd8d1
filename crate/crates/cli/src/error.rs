use std::path::Path;

use thiserror::Error;
use wp4::Wp4Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Io { .. } => 3,
            Self::Numerical(_) => 4,
        }
    }
}

impl From<Wp4Error> for CliError {
    fn from(e: Wp4Error) -> Self {
        match e {
            Wp4Error::Search(_) | Wp4Error::Numerical(_) => Self::Numerical(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}
