//! Weighted Fagnano problem: inscribed triangles of least weighted perimeter,
//! their characterization as periodic Snell billiard orbits, and the
//! coordinate machinery (barycentric, trilinear, tripolar, isogonal
//! conjugation, Apollonian circles) behind the construction.

pub mod apollonius;
pub mod billiards;
pub mod construction;
pub mod coords;
pub mod error;
pub mod geometry;
pub mod cli;
pub mod optimize;
pub mod svg;
pub mod tolerance;

pub use apollonius::{apollonian_circle, apollonian_common_points, tilde_triangle, TildeTriangle};
pub use billiards::{billiard_step, simulate, snell_reflect, solve_river, BilliardState, RiverInstance};
pub use construction::{
    coeffs_from_weights, snell_fagnano_point, OrbitStatus, RefractionCoeffs, SnellOrbitResult, Weights,
};
pub use error::{Error, Result};
pub use geometry::{InscribedTriangle, Point2, Side, Triangle};
pub use optimize::{minimize_inscribed, weighted_perimeter, MinimizeOptions};
pub use tolerance::Tolerances;
