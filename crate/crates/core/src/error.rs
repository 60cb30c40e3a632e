use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("point is not in the open cone: {0}")]
    NotInterior(String),

    #[error("point is outside the closed cone: {0}")]
    OutsideClosure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("invalid payload: {0}")]
    InvalidPayload(String),

    #[error("too many faces: {0}")]
    Overflow(String),

    #[error("map is not gauge-reversing: {0}")]
    NotReversing(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidCone(_) => "invalid_cone",
            Error::NotInterior(_) => "not_interior",
            Error::OutsideClosure(_) => "outside_closure",
            Error::Unsupported(_) => "unsupported",
            Error::Singular(_) => "singular",
            Error::Lp(_) => "lp",
            Error::InvalidPayload(_) => "invalid_payload",
            Error::Overflow(_) => "overflow",
            Error::NotReversing(_) => "not_reversing",
            Error::Verification(_) => "verification",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Json(_) => "json",
        }
    }
}
