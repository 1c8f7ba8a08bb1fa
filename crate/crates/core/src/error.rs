use thiserror::Error;

/// Errors raised by the exact functional calculus.
///
/// Scalars are carried in rendered form so the error type stays independent
/// of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lower parameter b[{index}] has vanishing Pochhammer symbol at j = {j}")]
    ZeroLowerPochhammer { index: usize, j: usize },

    #[error("series caps differ ({left} vs {right})")]
    CapMismatch { left: usize, right: usize },

    #[error("series has zero constant term and is not invertible")]
    NotInvertible,

    #[error("inner series of a composition must vanish at 0, found constant {constant}")]
    NonzeroConstantInner { constant: String },

    #[error("matrix is not nilpotent: N^{dimension} has nonzero entry {entry} at ({row}, {col})")]
    NotNilpotent {
        dimension: usize,
        row: usize,
        col: usize,
        entry: String,
    },

    #[error("series cap {cap} is below the required degree {required}")]
    CapTooSmall { cap: usize, required: usize },

    #[error(
        "not an exceptional point: with lambda = tr(H)/n = {lambda}, (H - lambda I)^{power} \
         has nonzero entry {entry} at ({row}, {col})"
    )]
    NotExceptionalPoint {
        lambda: String,
        power: usize,
        row: usize,
        col: usize,
        entry: String,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("internal consistency check failed: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
