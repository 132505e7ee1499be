use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: endpoints must be finite")]
    InvalidInterval { a: f64, b: f64 },
    #[error("lambda must lie in [0, 1], got {0}")]
    InvalidLambda(f64),
    #[error("node weights must be positive, got p = {p}, q = {q}")]
    InvalidNodeWeights { p: f64, q: f64 },
    #[error("curvature bounds out of order: m = {m} > M = {big_m}")]
    InvalidCurvature { m: f64, big_m: f64 },
    #[error("enclosure out of order: lower = {lower} > upper = {upper}")]
    InvertedEnclosure { lower: f64, upper: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Domain(#[from] EvalError),
    #[error("cannot differentiate `{0}`: exponent depends on x")]
    NonConstantExponent(String),
    #[error("cannot differentiate `{0}`: not smooth")]
    NonSmooth(String),
    #[error("f is not convex: f''({x}) = {value}")]
    ConvexityViolated { x: f64, value: f64 },
    #[error("weight is not symmetric about {center}: g({x}) differs from its mirror image")]
    SymmetryViolated { center: f64, x: f64 },
    #[error("weight is negative: g({x}) = {value}")]
    NegativeWeight { x: f64, value: f64 },
    #[error("weight leaves [0, 1]: g({x}) = {value}")]
    RangeViolated { x: f64, value: f64 },
    #[error("weight must be {expected}")]
    MonotonicityViolated { expected: &'static str },
    #[error("window half-width y = {y} is not admissible (need 0 < y <= {bound})")]
    AdmissibilityViolated { y: f64, bound: f64 },
    #[error("f must be nondecreasing on the interval, but f'(a) = {slope}")]
    DecreasingFunction { slope: f64 },
    #[error("point x = {x} lies outside [{a}, {b}]")]
    PointOutsideInterval { x: f64, a: f64, b: f64 },
    #[error("arguments must be positive, got ({a}, {b})")]
    NonpositiveInput { a: f64, b: f64 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("need at least {needed} sample points, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}
