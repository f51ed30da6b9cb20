use thiserror::Error;

use crate::tailfn::{TailKind, Violation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tail function: {}", describe(.0))]
    InvalidTail(Vec<Violation>),

    #[error("expected a {expected} tail, found {found}")]
    WrongKind {
        expected: &'static str,
        found: TailKind,
    },

    #[error("coordinate set must contain 0")]
    MissingZero,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} has size {size}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by bad input rather than by limits of the computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidTail(_)
                | Error::WrongKind { .. }
                | Error::MissingZero
                | Error::InvalidInput(_)
                | Error::Json(_)
        )
    }
}

fn describe(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
