use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its valid range, or an exact intermediate
    /// would not fit the wide-integer window.
    #[error("parameter out of range: {0}")]
    ParamRange(String),

    /// A real-valued function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A brute-force cap, sieve guard or table size limit was exceeded.
    #[error("resource guard: {what} = {requested} exceeds the configured limit {limit}")]
    ResourceGuard {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::ParamRange(msg.into())
    }

    pub(crate) fn overflow(what: &str) -> Self {
        Error::ParamRange(format!("{what} overflows the 128-bit window"))
    }
}
