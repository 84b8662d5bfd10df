use thiserror::Error;

/// Which part of a Fermi-ellipsoid recognition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermiMismatch {
    /// The momentum-momentum block is not the identity.
    LowerRightBlock,
    /// `M11 - Y^2` is not positive definite.
    PositionBlock,
    /// The level differs from `hbar * Tr X`.
    Level,
}

impl std::fmt::Display for FermiMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FermiMismatch::LowerRightBlock => "lower-right block is not the identity",
            FermiMismatch::PositionBlock => "M11 - Y^2 is not positive definite",
            FermiMismatch::Level => "level is inconsistent with hbar * Tr X",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("odd dimension {0}: phase-space matrices must be 2n x 2n")]
    OddDimension(usize),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not symmetric (relative defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e}, max {max_eigenvalue:.3e})")]
    NotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("matrix is not symplectic (relative defect {defect:.3e})")]
    NotSymplectic { defect: f64 },

    #[error("L is singular (|det L| = {det:.3e})")]
    SingularL { det: f64 },

    #[error("AA^T + BB^T is not positive definite")]
    DegenerateBlocks,

    #[error("blob carrier yields an asymmetric Y (relative defect {defect:.3e})")]
    InconsistentBlob { defect: f64 },

    #[error("not a Fermi ellipsoid: {reason} (deviation {deviation:.3e})")]
    NotAFermiEllipsoid {
        reason: FermiMismatch,
        deviation: f64,
    },

    #[error("P does not contain the polar dual (lambda_max = {lambda_max:.6})")]
    PairNotNested { lambda_max: f64 },

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("no sampled point fell inside the inner set")]
    EmptySample,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures that can only come from a bug or numerical
    /// corruption, never from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::DegenerateBlocks | Error::InconsistentBlob { .. } | Error::Invariant(_)
        )
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::OddDimension(_) => "OddDimension",
            Error::NonFinite => "NonFinite",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::NotSymplectic { .. } => "NotSymplectic",
            Error::SingularL { .. } => "SingularL",
            Error::DegenerateBlocks => "DegenerateBlocks",
            Error::InconsistentBlob { .. } => "InconsistentBlob",
            Error::NotAFermiEllipsoid { .. } => "NotAFermiEllipsoid",
            Error::PairNotNested { .. } => "PairNotNested",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::EmptySample => "EmptySample",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Invariant(_) => "InternalInvariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
