use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {point} is not inside the open unit disc")]
    OutsideDisc { point: C64 },

    #[error("degenerate ellipse: |a| and |c| coincide (||a|-|c|| = {gap:e})")]
    DegenerateEllipse { gap: f64 },

    #[error("point {point} is not in the open interior of the ellipse (g = {level})")]
    NotInInterior { point: C64, level: f64 },

    #[error("{what} did not converge after {iterations} iterations (last estimate {estimate})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        estimate: f64,
    },

    #[error("point {point} lies on the symbol curve (distance {distance:e} <= {guard:e})")]
    OnCurve {
        point: C64,
        distance: f64,
        guard: f64,
    },

    #[error("accumulated argument is not an integer multiple of 2pi (residual {residual})")]
    NonIntegerWinding { residual: f64 },

    #[error("parameter {z0} is outside the annulus 1 < |z| < {outer}")]
    OutOfAnnulus { z0: C64, outer: f64 },

    #[error("eigen-residual {residual:e} exceeds {limit:e}")]
    EigenResidualTooLarge { residual: f64, limit: f64 },

    #[error("eigenvalue {eigenvalue} violates the spectral gap (|small| < 1 < |large|)")]
    SpectralGapViolation { eigenvalue: C64 },

    #[error("Gram matrix condition number {condition:e} exceeds {limit:e}")]
    ProjectionIllConditioned { condition: f64, limit: f64 },

    #[error("vector support reaches index {top}, limit is {limit}")]
    SupportOverflow { top: usize, limit: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::OutsideDisc { .. } => "OUTSIDE_DISC",
            Error::DegenerateEllipse { .. } => "DEGENERATE_ELLIPSE",
            Error::NotInInterior { .. } => "NOT_IN_INTERIOR",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::OnCurve { .. } => "ON_CURVE",
            Error::NonIntegerWinding { .. } => "NON_INTEGER_WINDING",
            Error::OutOfAnnulus { .. } => "OUT_OF_ANNULUS",
            Error::EigenResidualTooLarge { .. } => "EIGEN_RESIDUAL_TOO_LARGE",
            Error::SpectralGapViolation { .. } => "SPECTRAL_GAP_VIOLATION",
            Error::ProjectionIllConditioned { .. } => "PROJECTION_ILL_CONDITIONED",
            Error::SupportOverflow { .. } => "SUPPORT_OVERFLOW",
            Error::Precondition(_) => "PRECONDITION",
            Error::InvalidSymbol(_) => "INVALID_SYMBOL",
        }
    }
}
