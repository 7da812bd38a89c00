use thiserror::Error;

/// Errors raised by the library. Variants fall into three groups: malformed
/// input, violated preconditions, and numerical failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix entry count {len} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not an isometry (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("operators {i} and {j} do not commute (commutator norm {norm:e})")]
    NotCommuting { i: usize, j: usize, norm: f64 },

    #[error("simultaneous diagonalization failed: {0}")]
    DiagonalizationFailed(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("unsupported dimension {dim} for {what}")]
    UnsupportedDimension { what: &'static str, dim: usize },

    #[error("family is empty")]
    EmptyFamily,

    #[error("certificate does not match family: {0}")]
    CertificateMismatch(String),

    #[error("direction ({0:.6}, {1:.6}, {2:.6}) is not a pure fixed point of the channel")]
    NotFixedPoint(f64, f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
