use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("numerical blow-up: {0}")]
    Blowup(String),

    #[error("{0}")]
    Core(su11_core::Error),

    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl From<su11_core::Error> for CliError {
    fn from(e: su11_core::Error) -> Self {
        match e {
            su11_core::Error::Blowup(msg) => CliError::Blowup(msg),
            other => CliError::Core(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 0 success, 1 validation or failed check, 2 numerical blow-up.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Blowup(_) => 2,
            _ => 1,
        }
    }
}
