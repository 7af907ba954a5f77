use std::io;

use thiserror::Error;

/// Errors raised while building, loading or querying a store.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed store data: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{what} {value} out of range (must be below {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("leaf column holds more than one set bit; {0} vocabulary encoding needs at most one per column")]
    VocabularyConflict(&'static str),

    #[error("term not found: {0}")]
    NotFound(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value < limit {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value, limit })
    }
}
