use thiserror::Error;

/// Errors surfaced by subcommands, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad ranges, unparseable input files. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Failures while running or writing output. Exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<swap_tur_core::Error> for CliError {
    fn from(e: swap_tur_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
