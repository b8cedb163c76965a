use thiserror::Error;

use crate::model::Rectangle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rectangle {rect} does not fit a {rows}x{cols} matrix")]
    OutOfBounds {
        rect: Rectangle,
        rows: usize,
        cols: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("unknown tree node {0}")]
    UnknownNode(usize),

    #[error("delta profile sums to {0}, expected 0")]
    NonZeroSum(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what}: {count} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    /// A result failed its own exactness check. Always a bug.
    #[error("internal verification failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
