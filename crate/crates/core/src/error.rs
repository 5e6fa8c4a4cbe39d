use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("unsupported dimension {0}: only odd N is supported")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("delta {0} outside the admissible range {1}")]
    DeltaOutOfRange(f64, &'static str),

    #[error("unit `{name}` must be finite and positive, got {value}")]
    InvalidUnit { name: &'static str, value: f64 },

    #[error("index {index} outside the symmetric range [-{half}, {half}]")]
    IndexOutOfRange { index: i64, half: i64 },

    #[error("displacement {displacement} is not an integer multiple of the grid spacing {spacing}")]
    OffGrid { displacement: f64, spacing: f64 },

    #[error("gaussian width must be positive, got {0}")]
    InvalidSigma(f64),

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("empty parameter list: {0}")]
    EmptyList(&'static str),
}
