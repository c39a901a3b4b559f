use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller-side misuse: mismatched arities or fields, out-of-range indices.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A sampling or fitting routine produced inconsistent data.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    /// Every sample landed in the base locus of a map.
    #[error("degenerate map: {0}")]
    DegenerateMap(String),
    /// A verified hint turned out to be false.
    #[error("hint rejected: {0}")]
    HintRejected(String),
    #[error("unclassified surface: {0}")]
    Unclassified(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A declared precondition of a construction does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
