use thiserror::Error;

/// Errors raised by the exact oracles and their parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input. `position` is a byte offset into the input.
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    /// An enumeration or optimisation would exceed a configured bound.
    #[error("capacity exceeded: {what} needs {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// A documented precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A well-formed request that cannot be served with the given inputs.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn contract(message: impl Into<String>) -> Self {
        Error::Contract(message.into())
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub(crate) fn capacity(what: &'static str, requested: usize, limit: usize) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
