use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(String),
    #[error("validation: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] kneser_core::Error),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl CliError {
    /// 2 for bad input, 3 for refused hypotheses, 4 for internal failures.
    pub fn exit_code(&self) -> i32 {
        use kneser_core::ErrorKind;
        match self {
            CliError::Io(_) | CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Invalid => 2,
                ErrorKind::Refused => 3,
                ErrorKind::Internal => 4,
            },
        }
    }

    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io_error",
            CliError::Parse(_) => "parse_error",
            CliError::Validation(_) => "validation_error",
            CliError::Core(e) => e.code(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
