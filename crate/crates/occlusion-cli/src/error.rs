use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("non-convergence: {0}")]
    NonConvergence(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] occlusion_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Usage(_) => 2,
            CliError::NonConvergence(_) | CliError::Core(occlusion_core::Error::NonConvergence(_)) => 3,
            CliError::Invariant(_) => 4,
            _ => 1,
        }
    }
}
