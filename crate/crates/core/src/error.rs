use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: &'static str, reason: String },

    #[error("invalid function specification: {0}")]
    InvalidSpec(String),

    #[error("invalid numeric configuration: {0}")]
    InvalidConfig(String),

    #[error("point {x:?} lies outside the domain of {family}")]
    Domain { family: &'static str, x: Vec<f64> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("graph projection search failed: {0}")]
    SearchFailure(String),

    #[error("selection index {index} out of range ({available} projections)")]
    InvalidSelection { index: usize, available: usize },

    #[error("derivative vanishes at {x:?}")]
    DerivativeSingular { x: Vec<f64> },

    #[error("function is not differentiable at {x:?}")]
    NotDifferentiable { x: Vec<f64> },

    #[error("rank-one update is singular (|1 + v^T M^-1 u| = {denominator:e})")]
    SingularUpdate { denominator: f64 },

    #[error("matrix is singular or too ill-conditioned to invert")]
    SingularMatrix,

    #[error("Jacobian of the inverse operator is singular (reciprocal condition {rcond:e})")]
    SingularJacobian { rcond: f64 },

    #[error("trajectory tail too short for rate estimation: {0}")]
    InsufficientTail(String),
}

impl Error {
    /// Stable identifier used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameters { .. } => "InvalidParameters",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Domain { .. } => "DomainError",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::Unsupported(_) => "Unsupported",
            Error::SearchFailure(_) => "SearchFailure",
            Error::InvalidSelection { .. } => "InvalidSelection",
            Error::DerivativeSingular { .. } => "DerivativeSingular",
            Error::NotDifferentiable { .. } => "NotDifferentiable",
            Error::SingularUpdate { .. } => "SingularUpdate",
            Error::SingularMatrix => "SingularMatrix",
            Error::SingularJacobian { .. } => "SingularJacobian",
            Error::InsufficientTail(_) => "InsufficientTail",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SearchFailure(_)
                | Error::SingularJacobian { .. }
                | Error::SingularMatrix
                | Error::SingularUpdate { .. }
                | Error::DerivativeSingular { .. }
                | Error::NotDifferentiable { .. }
                | Error::InsufficientTail(_)
        )
    }
}
