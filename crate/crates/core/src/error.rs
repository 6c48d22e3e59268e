use alloc::string::String;

use crate::certificate::Condition;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("precondition failed: {condition} ({detail})")]
    Precondition { condition: Condition, detail: String },
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid must be strictly increasing")]
    UnsortedGrid,
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
