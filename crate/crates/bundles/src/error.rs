//! Crate-wide error type.
//!
//! Errors are grouped by what the caller did wrong (bad input, violated
//! hypothesis) or by what the library refused to do (resource caps).
//! `Internal` marks a failed self-check and always indicates a bug here,
//! never in the caller.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not regular")]
    NotRegular,

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("walk is not closed")]
    NotClosed,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("connection invalid on oriented edge ({tail}, {head}): {reason}")]
    ConnectionInvalid {
        tail: usize,
        head: usize,
        reason: String,
    },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("resource cap exceeded: {cap} (limit {limit})")]
    ResourceCap { cap: &'static str, limit: u64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by exceeding a configured resource cap, as
    /// opposed to malformed input or failed hypotheses.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
