use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("pair index ({i}, {j}) out of range for {n} points")]
    Index { i: usize, j: usize, n: usize },

    #[error("invalid scale factor {0}: must be positive and finite")]
    InvalidScale(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("all high-dimensional distances are zero")]
    DegenerateHighSpace,

    #[error("all embedded distances are zero")]
    DegenerateEmbedding,

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("empty input")]
    EmptyInput,

    #[error("invalid weight {value} at position {index}: weights must be positive")]
    InvalidWeight { index: usize, value: f64 },

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("ordering tally is empty")]
    EmptyTally,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

/// Coarse error classes used for process exit codes and C status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidRequest(_) | Error::Index { .. } | Error::InvalidScale(_) => {
                ErrorClass::Usage
            }
            Error::DegenerateHighSpace
            | Error::DegenerateEmbedding
            | Error::UndefinedCorrelation(_)
            | Error::NumericalFailure(_) => ErrorClass::Numerical,
            _ => ErrorClass::Data,
        }
    }
}
