use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config lines or parameter values.
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The model rejected the parameters or the run failed.
    #[error(transparent)]
    Model(#[from] cablewave::Error),

    #[error("{failed} of {total} verification checks failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if is_parameter_error(e) => 2,
            _ => 1,
        }
    }
}

/// Errors caused by the requested parameters rather than by the run itself.
fn is_parameter_error(e: &cablewave::Error) -> bool {
    use cablewave::Error::*;
    !matches!(
        e,
        InstabilityDetected { .. } | InsufficientDuration { .. } | TooFewSamples { .. }
    )
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
