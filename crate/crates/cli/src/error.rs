use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Domain(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => ExitCode::from(2),
            CliError::Invalid(_) | CliError::Domain(_) => ExitCode::from(1),
            CliError::CrossCheck(_) => ExitCode::from(3),
        }
    }
}
