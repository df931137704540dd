use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed input at {pointer}: {message}")]
    Malformed {
        path: PathBuf,
        pointer: String,
        message: String,
    },
    #[error("invalid option {option}: {message}")]
    Option { option: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("matrix dimension {found} exceeds LHL_MAX_DIM = {cap}")]
    TooLarge { found: usize, cap: usize },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 1 for inputs that parse but fail validation, 2 for malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed { .. } | CliError::Option { .. } | CliError::Read { .. } => 2,
            CliError::Invalid(_)
            | CliError::TooLarge { .. }
            | CliError::Failed(_)
            | CliError::Write { .. } => 1,
        }
    }

    pub fn invalid(e: impl std::fmt::Display) -> Self {
        CliError::Invalid(e.to_string())
    }
}
