use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration (counts, ranges, missing fields).
    #[error("configuration error: {0}")]
    Config(String),

    /// A random geometry could not be produced within the retry budget.
    #[error("generation error: {0}")]
    Generation(String),

    /// An argument outside the domain of a model function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("realization with seed {seed:#018x} failed: {source}")]
    Realization {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("result file format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: String, expected: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn generation(msg: impl Into<String>) -> Self {
        Error::Generation(msg.into())
    }

    pub(crate) fn with_seed(self, seed: u64) -> Self {
        match self {
            e @ Error::Realization { .. } => e,
            other => Error::Realization {
                seed,
                source: Box::new(other),
            },
        }
    }
}
