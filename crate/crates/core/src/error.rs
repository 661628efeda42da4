use thiserror::Error;

use crate::signature::{Op, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable `{0}` has no value in the assignment")]
    UnknownVariable(String),
    #[error("operation `{op}` is not part of signature `{signature}`")]
    UnknownOperation { op: Op, signature: Signature },
    #[error("signature mismatch: expected `{expected}`, found `{found}`")]
    SignatureMismatch {
        expected: Signature,
        found: Signature,
    },
    #[error("space kind mismatch: expected `{expected}`, found `{found}`")]
    KindMismatch { expected: String, found: String },
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("budget exceeded: {what} needs {requested}, limit is {limit}")]
    Budget {
        what: String,
        requested: u128,
        limit: u128,
    },
    #[error("profile `{0}` has no duality; use its bounded counterpart")]
    NoDuality(String),
    #[error("not a member of the variety: {0}")]
    NotMember(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Parse(#[from] crate::parse::ParseError),
    #[error("{0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn budget(what: impl Into<String>, requested: u128, limit: u128) -> Self {
        Error::Budget {
            what: what.into(),
            requested,
            limit,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
