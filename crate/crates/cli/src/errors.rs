//! Command-line error taxonomy with fixed exit codes, so scripts can
//! distinguish bad input (1) from I/O trouble (2) from two runs that
//! share no hosts (3).

use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Alignment(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Alignment(_) => 3,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<rolegraph::Error> for CliError {
    fn from(err: rolegraph::Error) -> Self {
        match err {
            rolegraph::Error::EmptyAlignment => CliError::Alignment(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
