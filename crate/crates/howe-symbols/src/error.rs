//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by symbol construction and the combinatorial engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Text or JSON input could not be parsed as a symbol.
    #[error("cannot parse symbol `{input}`: {reason}")]
    Parse { input: String, reason: String },
    /// A row is not strictly decreasing.
    #[error("row {row:?} is not strictly decreasing")]
    NotDecreasing { row: Vec<u32> },
    /// A symbol expected to be special is not.
    #[error("symbol {0} is not special")]
    NotSpecial(String),
    /// Wrong defect for the requested operation.
    #[error("defect mismatch: {0}")]
    Defect(String),
    /// A subset contains an entry that is not a single of its base symbol.
    #[error("entry {0} is not a single of the base symbol")]
    NotSingle(String),
    /// A symbol does not belong to the family of the given base.
    #[error("symbol {symbol} is not in the family of {base}")]
    NotInFamily { symbol: String, base: String },
    /// The two special symbols cannot be aligned into a covered size regime.
    #[error("unsupported sizes: {0}")]
    Sizes(String),
    /// The relation D is empty where a non-empty relation is required.
    #[error("relation D is empty for ({0}, {1})")]
    EmptyRelation(String, String),
    /// The derivative scan found nothing to remove.
    #[error("pair is terminal: both symbols regular and D one-to-one")]
    Terminal,
    /// No symbol satisfies the conditions asked of a witness.
    #[error("no witness exists: {0}")]
    NoWitness(String),
    /// Invalid argument combination.
    #[error("invalid argument: {0}")]
    Invalid(String),
    /// A structural property that must hold was violated.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
