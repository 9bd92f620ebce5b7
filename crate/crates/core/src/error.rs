use crate::kernel::Convention;

/// Errors shared across the kernel, family, verification, and cache layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// `3n + 1` left the 128-bit range. The stored value is the last
    /// in-range iterate; the result is never silently wrapped.
    #[error("arithmetic overflow beyond 128 bits while stepping from {at}")]
    Overflow { at: u128 },

    /// The step budget ran out before the trajectory reached 1.
    #[error("step budget of {budget} exhausted at seed {seed}")]
    BudgetExhausted { seed: u128, budget: u32 },

    /// A caller violated an operation precondition (zero input, even
    /// argument where an odd one is required, zero budget, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A verification configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Seed search scanned the whole window without a qualifying beta.
    #[error("no qualifying beta within the first {depth} family terms")]
    SeedNotFound { depth: usize },

    /// A memo file had a bad magic, version, or truncated payload.
    #[error("memo file format error: {0}")]
    Format(String),

    /// A memo file was built under a different step-count convention
    /// than the caller demands.
    #[error("memo file uses the {found} convention, {requested} requested")]
    ConventionMismatch {
        found: Convention,
        requested: Convention,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
