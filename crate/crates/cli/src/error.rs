use thiserror::Error;

/// Failure classes, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Overflow(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) | CliError::Output(_) => 2,
            CliError::Overflow(_) => 3,
        }
    }

    /// Classifies an error raised while mining.
    pub fn from_mining(e: scpm_core::Error) -> Self {
        match e {
            scpm_core::Error::CandidateOverflow { .. } => CliError::Overflow(e.to_string()),
            scpm_core::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
