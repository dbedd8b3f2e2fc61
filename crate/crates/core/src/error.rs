use thiserror::Error;

/// Errors raised by the geometry, bound and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate {value} at index {index}")]
    NonFiniteCoordinate { index: usize, value: f64 },

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("cannot parse norm spec {0:?}")]
    NormParse(String),

    #[error("cannot parse bound kind {0:?}")]
    BoundParse(String),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("exponent p = {0} outside [0, 1]")]
    PExponentOutOfRange(f64),

    #[error("exponent q = {0} must be finite and strictly positive")]
    QExponentOutOfRange(f64),

    #[error("arccos argument {0} lies outside [-1, 1] beyond tolerance")]
    AngleOutOfRange(f64),

    #[error("ratio undefined for identical arguments")]
    IdenticalArguments,

    #[error("degenerate pair: |x - y| = {separation:e} is below 1e-12 of max(|x|, |y|) = {scale:e}")]
    DegeneratePair { separation: f64, scale: f64 },

    #[error("operation requires an inner-product norm, got {0}")]
    NotInnerProduct(String),

    #[error("norms differ: |x| = {x_norm}, |y| = {y_norm}")]
    NormMismatch { x_norm: f64, y_norm: f64 },

    #[error("invalid normalized pair (a = {a}, b = {b}): {reason}")]
    InvalidPair { a: f64, b: f64, reason: &'static str },

    #[error("more than one sign change ({sign_changes}) of the derivative surrogate for a = {a}, b = {b}")]
    MultipleSignChanges { a: f64, b: f64, sign_changes: usize, grid: Vec<(f64, f64)> },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
