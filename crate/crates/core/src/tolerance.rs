use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the constructions.
///
/// Every value is relative: areas are compared against the squared triangle
/// diameter and lengths against the diameter, so results do not depend on
/// the scale of the input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Minimum |signed area| / diameter² of a usable triangle.
    pub eps_degenerate: f64,
    /// Generic geometric residual (point on line, pedal orthogonality, ...).
    pub residual: f64,
    /// Strict margin in the angle conditions `α + α̃ < π`.
    pub eps_angle: f64,
    /// Cevian concurrency and similarity checks of the main construction.
    pub concurrency: f64,
    /// Distance re-validation of tripolar candidates and Apollonian membership.
    pub validation: f64,
    /// Distance (in side parameter) at which a billiard ray counts as hitting a vertex.
    pub vertex_hit: f64,
    /// Relative discriminant below which two circles are treated as tangent.
    pub tangency: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_degenerate: 1e-12,
            residual: 1e-10,
            eps_angle: 1e-10,
            concurrency: 1e-9,
            validation: 1e-8,
            vertex_hit: 1e-10,
            tangency: 1e-10,
        }
    }
}

impl Tolerances {
    /// Defaults with the generic residual tolerance replaced.
    pub fn with_residual(residual: f64) -> Self {
        Self {
            residual,
            ..Self::default()
        }
    }
}
