use thiserror::Error;

use crate::geometry::Side;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    TriangleInequalityViolated(f64, f64, f64),

    #[error("triangle is degenerate (|signed area| = {area:e})")]
    DegenerateTriangle { area: f64 },

    #[error("line through two coincident points")]
    DegenerateLine,

    #[error("barycentric coordinates sum to zero (point at infinity)")]
    IdealPoint,

    #[error("point lies on side line {0}")]
    OnSideLine(Side),

    #[error("tripolar conversion is singular (no finite root)")]
    SingularConversion,

    #[error("no point has the requested tripolar coordinates")]
    NoSuchPoint,

    #[error("the tilde triangle is degenerate or does not exist")]
    TildeDegenerate,

    #[error("cevians are not concurrent (miss distance {residual:e})")]
    ConcurrencyViolation { residual: f64 },

    #[error("common point misses the third Apollonian circle (ratio residual {residual:e})")]
    ThirdCircleMissed { residual: f64 },

    #[error("interior tests disagree: angle conditions {conditions:?}, min barycentric {min_barycentric:e}")]
    InteriorMismatch {
        conditions: [bool; 3],
        min_barycentric: f64,
    },

    #[error("total internal reflection (sin of departure angle = {sine})")]
    TotalInternalReflection { sine: f64 },

    #[error("trajectory hits a vertex")]
    HitVertex,

    #[error("billiard step {step} failed: {source}")]
    Dynamics {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
