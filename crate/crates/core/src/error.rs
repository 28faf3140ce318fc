use thiserror::Error;

/// Errors raised across the library.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in, so the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("root {root} lies within {tau} of the unit circle (| |r| - 1 | = {distance:e})")]
    CircleViolation {
        root: String,
        distance: f64,
        tau: f64,
    },

    #[error("expression is identically zero")]
    ZeroSymbol,

    #[error("constant factor must be nonzero")]
    ZeroConstant,

    #[error("multiplicity of root {root} is zero")]
    ZeroMultiplicity { root: String },

    #[error("evaluation at a pole: {point}")]
    PoleEvaluation { point: String },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },

    #[error("winding number is {winding}, a Wiener-Hopf factorization needs winding 0")]
    WindingNonZero { winding: i64 },

    #[error("buffer too small: {msg}")]
    BufferTooSmall { msg: String },

    #[error("compressed operator is singular (LU breakdown at pivot {pivot})")]
    SingularCompression { pivot: usize },

    #[error("finite truncation is singular (LU breakdown at pivot {pivot})")]
    SingularTruncation { pivot: usize },

    #[error("matrix is singular (LU breakdown at pivot {pivot})")]
    SingularMatrix { pivot: usize },

    #[error("operator is not invertible: {msg}")]
    NotInvertible { msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
