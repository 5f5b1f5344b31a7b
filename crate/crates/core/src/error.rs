//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by complex construction, geometry, map validation,
/// network synthesis and the estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input lists must be non-empty")]
    EmptyInput,

    #[error("coordinate is not finite: vertex {vertex}, component {component}")]
    NonFiniteCoordinate { vertex: usize, component: usize },

    #[error("maximal simplices have mixed lengths ({found} vs {expected}); complex is not pure")]
    NonPure { expected: usize, found: usize },

    #[error("vertex index {index} out of range (vertex count {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate maximal simplex {simplex:?}")]
    DuplicateMaximalSimplex { simplex: Vec<usize> },

    #[error("simplex {simplex:?} is affinely dependent")]
    AffinelyDependent { simplex: Vec<usize> },

    #[error("maximal simplices {a:?} and {b:?} intersect off their shared face")]
    BadIntersection { a: Vec<usize>, b: Vec<usize> },

    #[error("{indices:?} is not a simplex of the complex")]
    NotASimplex { indices: Vec<usize> },

    #[error("epsilon must be positive (got {value})")]
    NonPositiveEpsilon { value: f64 },

    #[error("subdivision count must be at least 1")]
    ZeroSubdivisions,

    #[error("{count} points exceed ambient dimension {ambient_dim} + 1")]
    TooManyPoints { count: usize, ambient_dim: usize },

    #[error("simplex is numerically degenerate (condition estimate {cond:.3e})")]
    DegenerateSimplex { cond: f64 },

    #[error("point lies off the simplex's affine hull (residual {residual:.3e})")]
    OffAffineHull { residual: f64 },

    #[error("image of simplex {simplex:?} spans no simplex of the target complex")]
    NotASimplexImage { simplex: Vec<usize> },

    #[error("point is outside the domain complex")]
    OutsideDomain,

    #[error("point is outside the reference simplex")]
    OutsideSimplex,

    #[error("star condition unsatisfied after {max_t} subdivisions")]
    StarConditionUnsatisfied { max_t: usize },

    #[error("sampler failure: {reason}")]
    SamplerFailure { reason: String },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("integer overflow evaluating the complexity bound")]
    Overflow,

    #[error("malformed file: {reason}")]
    FormatError { reason: String },

    #[error("invariant violation: {reason}")]
    InvariantViolation { reason: String },

    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn format(reason: impl Into<String>) -> Self {
        Error::FormatError { reason: reason.into() }
    }

    pub(crate) fn invariant(reason: impl Into<String>) -> Self {
        Error::InvariantViolation { reason: reason.into() }
    }

    pub(crate) fn sampler(reason: impl Into<String>) -> Self {
        Error::SamplerFailure { reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
