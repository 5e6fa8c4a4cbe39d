use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version` output; not a failure.
    #[error("{0}")]
    Help(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Config(#[from] qkin::Error),

    #[error("cannot read config file {}: {source}", path.display())]
    ConfigRead { path: PathBuf, source: io::Error },

    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("invariant check failed: {}", .0.join(", "))]
    InvariantFailed(Vec<String>),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 invariant failure, 2 usage or configuration, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Help(_) => 0,
            CliError::InvariantFailed(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::ConfigRead { .. } | CliError::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
