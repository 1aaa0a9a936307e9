use std::fmt;

use rgl_core::Error;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    /// Success, including discrepancies that carry a certificate.
    Ok = 0,
    /// A self-check, oracle comparison or uncertified discrepancy failed.
    Verification = 1,
    /// Filesystem trouble or a corrupted data file.
    Io = 2,
    Usage = 64,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn new(code: ExitCode, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Usage, message)
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Verification, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain(_) | Error::SingularDiscriminant { .. } => ExitCode::Usage,
            Error::FactorizationIncomplete { .. } | Error::Verification(_) => ExitCode::Verification,
            Error::Parse(_) | Error::Io(_) | Error::Json(_) => ExitCode::Io,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(ExitCode::Io, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new(ExitCode::Io, e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::new(ExitCode::Io, e.to_string())
    }
}
