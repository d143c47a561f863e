use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },

    #[error(transparent)]
    Core(#[from] switchlab_core::Error),

    #[error("{0}")]
    Argument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Field { field: field.into(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
