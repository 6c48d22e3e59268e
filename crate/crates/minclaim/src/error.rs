use std::path::PathBuf;

use minclaim_core::Condition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] minclaim_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Json {
        context: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("sampler: {0}")]
    Sampling(String),
    #[error("bounds violate lower <= exact <= upper at x = {x} (by {excess:e})")]
    Sandwich { x: f64, excess: f64 },
}

/// Process exit codes of the command line.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILS: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const PREMISE: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// The failed premise, when this is a premise failure.
    pub fn condition(&self) -> Option<Condition> {
        match self {
            Error::Core(minclaim_core::Error::Precondition { condition, .. }) => Some(*condition),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(minclaim_core::Error::Precondition { .. }) => exit::PREMISE,
            Error::Core(_) | Error::Sampling(_) => exit::DOMAIN,
            Error::Io { .. } | Error::Json { .. } | Error::Usage(_) => exit::USAGE,
            Error::Sandwich { .. } => exit::FAILS,
        }
    }
}
