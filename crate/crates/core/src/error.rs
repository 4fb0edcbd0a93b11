use serde::Serialize;
use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants other than [`Error::Unresolved`] signal a violated precondition or an
/// input outside the supported range; the CLI maps them to exit code 2.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("defining polynomial is reducible over its level")]
    ReducibleDefiningPolynomial,
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("factorization over this level is not supported: {0}")]
    UnsupportedLevel(String),
    #[error("level is inseparable")]
    InseparableLevel,
    #[error("closed point is inseparable")]
    InseparablePoint,
    #[error("splitting field degree {0} exceeds the supported bound")]
    SplittingTooLarge(usize),
    #[error("points live in different ambient spaces")]
    MixedAmbient,
    #[error("cycle degree {0} is divisible by 3")]
    DegreeDivisibleBy3(usize),
    #[error("points are not in linearly general position")]
    NotLgp,
    #[error("point lies in the indeterminacy locus")]
    IndeterminacyLocus,
    #[error("line meets the fundamental locus of the Cremona map")]
    LineMeetsFundamentalLocus,
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("interpolated family is not generically in linearly general position")]
    GenericallyNotLgp,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ground field not supported for this operation")]
    UnsupportedGroundField,
    #[error("point does not occur in the cycle")]
    PointNotInCycle,
    #[error("point is not on the hypersurface")]
    NotOnHypersurface,
    #[error("hyperplane contains the curve")]
    HyperplaneContainsCurve,
    #[error("curve is contained in the hypersurface")]
    CurveContained,
    #[error("input is not general: {0}")]
    NotGeneral(String),
    #[error("wrong dimension: {0}")]
    WrongDimension(String),
    #[error("basis elements are linearly dependent")]
    DependentBasis,
    #[error("scaling failure: {0}")]
    ScalingFailure(String),
    #[error("curve through the cycle is not determined (degree {0})")]
    Undetermined(usize),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no point found after {0} attempts")]
    NoneFound(usize),
    #[error("parametrization is not Galois stable")]
    NotGaloisStable,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unresolved: {}", .0.reason)]
    Unresolved(Box<Diagnostics>),
}

/// Diagnostics attached to an unresolved descent.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Diagnostics {
    pub reason: String,
    pub details: serde_json::Value,
}

pub type Result<T> = std::result::Result<T, Error>;
