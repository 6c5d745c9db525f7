use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not normal: {0}")]
    NotNormal(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("fiber mismatch")]
    FiberMismatch,
    #[error("ring mismatch")]
    RingMismatch,
    #[error("not in seed: {0}")]
    NotInSeed(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("missing green data")]
    NoGreen,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
