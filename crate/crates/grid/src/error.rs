use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("box length must be positive and finite, got {0}")]
    BadBoxLength(f64),

    #[error("grids do not match: {0}")]
    Mismatch(String),

    #[error("{0}")]
    Symbolic(String),

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, GridError>;
