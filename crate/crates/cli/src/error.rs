// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid value at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] lambda_holonomy::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation { path: path.into(), message: message.into() }
    }

    /// 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Failed(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
