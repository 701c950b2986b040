use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two input keys compare equal. Ties are rejected, never broken silently.
    #[error("keys must be pairwise distinct: {0}")]
    DistinctnessViolation(String),

    #[error("position out of range: {0}")]
    IndexError(String),

    #[error("argument outside its domain: {0}")]
    DomainError(String),

    /// Target rank is zero or exceeds the number of elements.
    #[error("invalid target rank k={k} for n={n}")]
    InvalidTarget { k: usize, n: usize },

    #[error("key not present in the value set")]
    NotFound,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A streaming routine asked for more elements than its source holds.
    /// This is always a plumbing bug in the caller.
    #[error("stream contract violated: {0}")]
    ContractViolation(String),

    /// Exact selection ended with a sentinel in the center slot.
    #[error("exact selection failed: center slot holds {0}")]
    SelectionFailure(&'static str),

    #[error("malformed input: {0}")]
    Parse(String),
}
