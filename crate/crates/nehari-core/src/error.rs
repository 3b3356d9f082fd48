use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error taxonomy shared by all modules.
///
/// `InternalInconsistency` is reserved for situations where two independent
/// computations of the same quantity disagree beyond tolerance; callers treat
/// it as fatal. Theorem-level disagreements are *not* errors; they are carried
/// in audit reports as failed checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("symbol is numerically singular on the circle: {0}")]
    NotInvertibleOnCircle(String),

    #[error("grid resolution exhausted: {0}")]
    ResolutionFailure(String),

    #[error("level {k} is degenerate: {reason}")]
    DegenerateLevel { k: usize, reason: String },

    #[error("spectral gap violation at level {k}: {reason}")]
    GapViolation { k: usize, reason: String },

    #[error("ill-conditioned instance: {0}")]
    IllConditioned(String),

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::InternalInconsistency(msg.into())
    }
}
