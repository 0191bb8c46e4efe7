use thiserror::Error;

/// Errors raised by the engine. Failed verifications are reported as data,
/// not as errors; these cover malformed input and exhausted budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("truncation would alias relations: need N >= {needed}, got N = {actual}")]
    TruncationTooSmall { needed: usize, actual: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("cosimplicial identity fails for (k, l) = ({k}, {l}) at level {level}")]
    CosimplicialIdentity { level: usize, k: usize, l: usize },

    #[error("tower did not stabilize within {0} levels (bound exceeded)")]
    TowerBoundExceeded(usize),

    #[error("unknown catalog entry: {0}")]
    UnknownCatalogEntry(String),

    #[error("out of desk-verifiable scope: {0}")]
    OutOfScope(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
