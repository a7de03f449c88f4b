use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Both compared vectors are zero, so the coincidence ratio is 0/0.
    #[error("undefined comparison: both vectors are zero")]
    UndefinedComparison,

    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    /// Configuration rejected while parsing or validating; `key` names the
    /// offending entry.
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("malformed config JSON: {0}")]
    MalformedConfig(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end:
    /// 2 config error, 3 computation error, 4 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::MalformedConfig(_) | Error::UnsupportedConfig(_) => 2,
            Error::InvalidInput(_) | Error::UndefinedComparison => 3,
            Error::Io { .. } | Error::Csv(_) => 4,
        }
    }
}
