use thiserror::Error;

/// Errors produced by tree construction, parsing, and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid tanglegram: {0}")]
    InvalidTanglegram(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("tanglegram of size {size} exceeds the configured cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
