use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires positive characteristic")]
    CharacteristicZero,
    #[error("no primitive root of unity of order {0} in this field")]
    NoRootOfUnity(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("matrix is singular")]
    Singular,
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("action does not map monomials to multiples of monomials")]
    NonMonomialAction,
    #[error("polynomial is not invariant: {0}")]
    NotInvariant(String),
    #[error("inconsistent group data: {0}")]
    InconsistentGroup(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("witness check failed: {0}")]
    WitnessFailed(String),
    #[error("degree limit {0} reached without a separating degree")]
    DegreeLimit(u32),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
