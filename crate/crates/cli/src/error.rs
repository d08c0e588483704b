use std::path::PathBuf;

use thiserror::Error;

/// Everything a subcommand can fail with, mapped onto exit codes: 1 for
/// bad input or usage, 2 when a verification step fails.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] ztnet::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use ztnet::Error as E;
        match self {
            CliError::Verification(_) => 2,
            CliError::Core(E::InvalidNet(_) | E::MalformedNet(_) | E::InequalityViolated(_)) => 2,
            _ => 1,
        }
    }
}
