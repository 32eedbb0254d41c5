use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("product of two infinite index sets is not supported")]
    InfiniteProduct,
    #[error("matrix is not finitely supported: {0}")]
    NotFinite(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular matrix on window of size {size} (determinant {det:e})")]
    Singular { size: usize, det: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
