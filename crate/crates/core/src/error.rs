use thiserror::Error;

use crate::minkowski::CaseClass;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("Unnormalized: Minkowski norm {norm} is not within {tol} of +1, 0 or -1")]
    Unnormalized { norm: f64, tol: f64 },

    #[error("Ambiguous: tolerance {0} lets the norm classes overlap (must be < 1/2)")]
    Ambiguous(f64),

    #[error("TooFar: point is {distance} away from the {class} manifold (limit 0.1)")]
    TooFar { class: CaseClass, distance: f64 },

    #[error("InvalidAxis: axis classifies as {found:?}, expected {expected}")]
    InvalidAxis { expected: CaseClass, found: Option<CaseClass> },

    #[error("ExtractionFailure: matrix is {residual:e} away from the kappa-dot image")]
    ExtractionFailure { residual: f64 },

    #[error("NearBoundary: half-trace {half_trace} is within tolerance of 1 but the element is neither parabolic nor identity")]
    NearBoundary { half_trace: f64 },

    #[error("NotInGroup: SU(1,1) residual {0:e}")]
    NotInGroup(f64),

    #[error("ClassMismatch: vector classifies as {found:?}, scenario is {expected}")]
    ClassMismatch { expected: CaseClass, found: Option<CaseClass> },

    #[error("WrongClass: operation needs {expected}, got {found}")]
    WrongClass { expected: CaseClass, found: CaseClass },

    #[error("LowerSheet: {0} lies on the lower sheet of the hyperboloid")]
    LowerSheet(&'static str),

    #[error("StepTooLarge: step {0} exceeds 0.1")]
    StepTooLarge(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Blowup: {0}")]
    Blowup(String),

    #[error("trajectory invariant violated: {0}")]
    InvalidTrajectory(String),
}

pub type Result<T> = std::result::Result<T, Error>;
