//! File formats and commands behind the `conmms` binary.

pub mod batch;
pub mod commands;
pub mod files;

use std::fmt;

use conmms::Error;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    CertificateFailure = 1,
    Parse = 2,
    Unsupported = 3,
    SizeCap = 4,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        CliError { status, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(Status::Parse, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Errors from the library outside of file parsing.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::SizeLimit { .. } => Status::SizeCap,
            Error::InternalGuarantee(_) => Status::CertificateFailure,
            Error::InvalidInput(_)
            | Error::Structural(_)
            | Error::UndefinedMms { .. }
            | Error::ClassMismatch { .. }
            | Error::UnsupportedBlock => Status::Unsupported,
        };
        CliError::new(status, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
