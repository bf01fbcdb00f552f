use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },

    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Library(su_interferometry::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<su_interferometry::Error> for CliError {
    fn from(e: su_interferometry::Error) -> Self {
        match e {
            su_interferometry::Error::InvalidParameter { field, reason } => CliError::Validation {
                field: field.to_string(),
                message: reason,
            },
            other => CliError::Library(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
