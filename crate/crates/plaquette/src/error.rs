use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error(transparent)]
    Model(plaquette_core::Error),

    /// A check ran to completion and failed.
    #[error("check failed: {0}")]
    Check(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation { .. } | Error::Io { .. } => 1,
            Error::Model(e) if !e.is_numerical() => 1,
            Error::Model(_) | Error::Check(_) => 2,
        }
    }
}

impl From<plaquette_core::Error> for Error {
    fn from(e: plaquette_core::Error) -> Self {
        match e {
            plaquette_core::Error::InvalidParameter { name, reason } => {
                Error::validation(name, reason)
            }
            plaquette_core::Error::InvalidGrid(reason) => Error::validation("sweep", reason),
            other => Error::Model(other),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        let full = e.to_string();
        let suffix = format!(" at line {line} column {column}");
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        Error::Parse {
            line,
            column,
            message,
        }
    }
}
