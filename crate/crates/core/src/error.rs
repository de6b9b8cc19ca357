use thiserror::Error;

/// Crate-wide error type. Constructors and verifiers return these instead of
/// panicking; panics are reserved for internal invariant violations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidSpec(String),

    #[error("point set is degenerate: {0}")]
    Degenerate(String),

    #[error("unknown vertex label {0}")]
    UnknownLabel(String),

    #[error("duplicate vertex label {0}")]
    DuplicateLabel(String),

    #[error("contact set must be nonempty")]
    EmptyContact,

    #[error("k = {k} out of range for this shape (max {max})")]
    KOutOfRange { k: usize, max: usize },

    #[error("zero polynomial has no sign classification")]
    ZeroPolynomial,

    #[error("linear system is singular")]
    SingularSystem,

    #[error("retry cap exceeded after {attempts} attempts: {context}")]
    RetryCapExceeded { attempts: u32, context: String },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
