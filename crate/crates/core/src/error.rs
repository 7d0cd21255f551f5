use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into three families the CLI maps onto exit codes: malformed
/// input, violated preconditions, and exceeded resource caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} of {requested} exceeds the limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("formula is not in CNF: constraint {index} applies a relation")]
    NotCnf { index: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("{0} out of range")]
    OutOfRange(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }

    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
