use std::path::PathBuf;

use thiserror::Error;

/// Failures of the experiment harness, grouped by process exit code.
#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad command line or configuration (exit code 1).
    #[error("{0}")]
    Usage(String),

    /// Unreadable or malformed input data (exit code 2).
    #[error("{0}")]
    Data(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An iterative solver hit its iteration cap (exit code 3).
    #[error("{0}")]
    Convergence(randproj::Error),

    /// Any other numerical failure surfaced by the library (exit code 2).
    #[error("{0}")]
    Numeric(randproj::Error),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => 1,
            BenchError::Data(_) | BenchError::Io { .. } | BenchError::Numeric(_) => 2,
            BenchError::Convergence(_) => 3,
        }
    }
}

impl From<randproj::Error> for BenchError {
    fn from(e: randproj::Error) -> Self {
        match e {
            randproj::Error::NoConvergence { .. } => BenchError::Convergence(e),
            randproj::Error::InvalidArgument(msg) => BenchError::Usage(msg),
            other => BenchError::Numeric(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
