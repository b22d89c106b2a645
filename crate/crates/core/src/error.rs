use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subspace is not contained in the enclosing space")]
    NotSubspace,

    #[error("index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },

    #[error("Leibniz identity fails at basis triple ({}, {}, {}), residual {residual}", .triple.0, .triple.1, .triple.2)]
    IdentityFailure {
        triple: (usize, usize, usize),
        residual: String,
    },

    #[error("map is not a homomorphism: bracket of basis pair ({}, {}) is not preserved", .witness.0, .witness.1)]
    NotHomomorphism { witness: (usize, usize) },

    #[error("map is not surjective")]
    NotSurjective,

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("level {level} is below the nilpotency class {class}")]
    LevelTooSmall { level: usize, class: usize },

    #[error("dimension {dim} exceeds the resource cap {cap}")]
    TooLarge { dim: usize, cap: usize },

    #[error("extension is not c-Lie-central")]
    NotCentral,

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("independent routes disagree: {0}")]
    Agreement(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::NotSubspace => "NOT_SUBSPACE",
            Error::Index { .. } => "INDEX_ERROR",
            Error::IdentityFailure { .. } => "IDENTITY_FAIL",
            Error::NotHomomorphism { .. } => "NOT_HOMOMORPHISM",
            Error::NotSurjective => "NOT_SURJECTIVE",
            Error::NotNilpotent => "NOT_NILPOTENT",
            Error::LevelTooSmall { .. } => "LEVEL_TOO_SMALL",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::NotCentral => "NOT_CENTRAL",
            Error::Assertion(_) => "ASSERTION_FAIL",
            Error::Agreement(_) => "AGREEMENT_FAIL",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Internal(_) => "INTERNAL",
            Error::Schema { .. } => "SCHEMA_ERROR",
            Error::Io(_) => "IO_ERROR",
        }
    }

    /// True for failures of a mathematical check rather than bad input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::Assertion(_) | Error::Agreement(_) | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
