//! Scenario files, sweeps and figure presets for the `clickstat` binary.

pub mod output;
pub mod run;
pub mod scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid scenario or parameters; exit status 2.
    #[error("{0}")]
    Validation(String),
    /// File I/O failure; exit status 3.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<clickstat::Error> for CliError {
    fn from(e: clickstat::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
