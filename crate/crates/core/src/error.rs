use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("problem dimension {dim} exceeds the configured cap {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("polynomial is not monic (leading coefficient deviates from I by {0:e})")]
    NotMonic(f64),

    #[error("degree {0} is odd; shift by z first")]
    OddDegree(usize),

    #[error("index {0} is odd; squared gaps need an even index")]
    OddIndex(usize),

    #[error("index {k} is outside the admissible range [{lo}, {hi}]")]
    IndexOutOfRange { k: usize, lo: usize, hi: usize },

    #[error("invalid radial polynomial: {0}")]
    InvalidShape(String),

    #[error("invalid degree {0} for this construction")]
    InvalidDegree(usize),

    #[error("leading coefficients vanish (a * alpha = 0)")]
    ZeroLeading,

    #[error("soundness check failed: {0}")]
    Soundness(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
