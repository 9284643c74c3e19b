//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
    #[error("leading coefficient must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("parameters fit no supported case: {0}")]
    CaseMismatch(String),
    #[error("no such configuration exists: {0}")]
    ImpossibleCase(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("function support is not contained in the variety")]
    SupportViolation,
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("graph is not regular: {0}")]
    NotRegular(String),
    #[error("hyperplane normal must be nonzero")]
    DegeneratePlane,
    #[error("covering set does not contain the base set")]
    OmegaNotCovering,
    #[error("set must be nonempty")]
    EmptySet,
    #[error("argument out of range: {0}")]
    BadRange(String),
    #[error("requested radius has an empty shell")]
    EmptyShell,
}

pub type Result<T> = std::result::Result<T, Error>;
