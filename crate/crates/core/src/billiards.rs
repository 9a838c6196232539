//! Snell billiards: rays that bounce inside the triangle and leave each side
//! at a refracted angle instead of the mirror angle.
//!
//! A side with coefficient `κ` sends a ray back so that
//! `sin(departure) = κ·sin(incidence)`, both angles measured from the inward
//! normal. With `κ` taken from [`coeffs_from_weights`](crate::construction::coeffs_from_weights)
//! the pedal orbit of the weighted Fagnano point is a counterclockwise
//! 3-periodic trajectory; the clockwise traversal uses the reciprocals.

use serde::{Deserialize, Serialize};

use crate::construction::RefractionCoeffs;
use crate::error::{Error, Result};
use crate::geometry::{line_param, Point2, Side, Triangle, Vec2};
use crate::tolerance::Tolerances;

/// Sends `incoming` back from a boundary with inward unit normal `normal`.
///
/// `ratio` is `sin(incidence) / sin(departure)`; the tangential component is
/// divided by it and the normal component flipped to point inward.
pub fn snell_reflect(incoming: Vec2, normal: Vec2, ratio: f64) -> Result<Vec2> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::InvalidInput(format!(
            "refraction ratio must be positive, got {ratio}"
        )));
    }
    let d = incoming.normalized();
    let n = normal.normalized();
    let tang = d - n * d.dot(n);
    let out_tang = tang / ratio;
    let sine = out_tang.norm();
    if sine > 1.0 {
        return Err(Error::TotalInternalReflection { sine });
    }
    Ok(out_tang + n * (1.0 - sine * sine).sqrt())
}

/// A ray leaving a point on a side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilliardState {
    pub side: Side,
    /// Parameter along the oriented side, in `[0, 1]`.
    pub param: f64,
    /// Unit direction, pointing into the triangle.
    pub direction: Vec2,
}

impl BilliardState {
    pub fn new(tri: &Triangle, side: Side, param: f64, direction: Vec2) -> Result<Self> {
        if !(0.0..=1.0).contains(&param) {
            return Err(Error::InvalidInput(format!(
                "start parameter must lie in [0, 1], got {param}"
            )));
        }
        let n = direction.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidInput("start direction must be nonzero".into()));
        }
        let direction = direction / n;
        if direction.dot(tri.inward_normal(side)) <= 0.0 {
            return Err(Error::InvalidInput(
                "start direction must point into the triangle".into(),
            ));
        }
        Ok(Self {
            side,
            param,
            direction,
        })
    }

    /// Launches from `tri.point_on_side(side, param)` toward `target`.
    pub fn toward(tri: &Triangle, side: Side, param: f64, target: Point2) -> Result<Self> {
        let p = tri.point_on_side(side, param);
        Self::new(tri, side, param, target - p)
    }

    pub fn position(&self, tri: &Triangle) -> Point2 {
        tri.point_on_side(self.side, self.param)
    }
}

/// Follows the ray to the next side and refracts it there.
pub fn billiard_step(
    state: &BilliardState,
    tri: &Triangle,
    k: &RefractionCoeffs,
    tol: &Tolerances,
) -> Result<BilliardState> {
    let p = state.position(tri);
    let d = state.direction;
    let mut hit: Option<(f64, Side, Point2)> = None;
    for side in Side::ALL {
        if side == state.side {
            continue;
        }
        let (q1, q2) = tri.side_endpoints(side);
        let e = q2 - q1;
        let denom = d.cross(e);
        if denom.abs() < 1e-300 {
            continue;
        }
        let tau = (q1 - p).cross(e) / denom;
        if tau <= 0.0 {
            continue;
        }
        let x = p + d * tau;
        let u = line_param(x, q1, q2);
        if !(-tol.vertex_hit..=1.0 + tol.vertex_hit).contains(&u) {
            continue;
        }
        if hit.is_none_or(|(best, _, _)| tau < best) {
            hit = Some((tau, side, x));
        }
    }
    let (_, side, x) = hit.ok_or_else(|| Error::InvalidInput("ray does not meet another side".into()))?;
    let (q1, q2) = tri.side_endpoints(side);
    let u = line_param(x, q1, q2);
    if u <= tol.vertex_hit || u >= 1.0 - tol.vertex_hit {
        return Err(Error::HitVertex);
    }
    let direction = snell_reflect(d, tri.inward_normal(side), 1.0 / k.for_side(side))?;
    Ok(BilliardState {
        side,
        param: u,
        direction,
    })
}

/// States visited, starting with `start`; failures carry the step index.
pub fn simulate(
    start: &BilliardState,
    tri: &Triangle,
    k: &RefractionCoeffs,
    steps: usize,
    tol: &Tolerances,
) -> Result<Vec<BilliardState>> {
    let mut states = Vec::with_capacity(steps + 1);
    states.push(*start);
    for step in 1..=steps {
        let next = billiard_step(states.last().expect("nonempty"), tri, k, tol).map_err(|e| {
            Error::Dynamics {
                step,
                source: Box::new(e),
            }
        })?;
        states.push(next);
    }
    Ok(states)
}

/// True when `n` steps bring the ray back to its start, same side, parameter
/// and direction within `tol`.
pub fn is_periodic(
    start: &BilliardState,
    tri: &Triangle,
    k: &RefractionCoeffs,
    n: usize,
    tol: f64,
) -> Result<bool> {
    let states = simulate(start, tri, k, n, &Tolerances::default())?;
    let end = states[n];
    Ok(end.side == start.side
        && (end.param - start.param).abs() <= tol
        && (end.direction - start.direction).norm() <= tol)
}

/// Two villages on the same side of a straight river; the crossing point X
/// minimizes `λ1|AX| + λ2|XB|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiverInstance {
    pub a: Point2,
    pub b: Point2,
    /// Two distinct points on the bank line.
    pub line: [Point2; 2],
    pub lam1: f64,
    pub lam2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiverSolution {
    pub x: Point2,
    pub cost: f64,
    /// `|sin θ_B / sin θ_A − λ1/λ2|`, angles of XB and XA from the bank normal.
    pub snell_residual: f64,
    /// `|d cost / d s|` at the solution, per unit length along the bank.
    pub gradient: f64,
}

impl RiverInstance {
    fn validate(&self) -> Result<()> {
        let [l0, l1] = self.line;
        let dir = l1 - l0;
        if dir.norm() <= 0.0 || dir.norm().is_nan() {
            return Err(Error::DegenerateLine);
        }
        for (name, v) in [("lambda1", self.lam1), ("lambda2", self.lam2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        let sa = dir.cross(self.a - l0);
        let sb = dir.cross(self.b - l0);
        if sa == 0.0 || sb == 0.0 || (sa > 0.0) != (sb > 0.0) {
            return Err(Error::InvalidInput(
                "both villages must lie strictly on the same side of the river".into(),
            ));
        }
        Ok(())
    }

    pub fn cost_at(&self, x: Point2) -> f64 {
        self.lam1 * self.a.dist(x) + self.lam2 * x.dist(self.b)
    }

    fn point_at(&self, s: f64) -> Point2 {
        self.line[0].lerp(self.line[1], s)
    }

    /// Derivative of the cost with respect to arc length along the bank.
    fn slope(&self, s: f64) -> f64 {
        let x = self.point_at(s);
        let u = (self.line[1] - self.line[0]).normalized();
        self.lam1 * (x - self.a).dot(u) / x.dist(self.a) + self.lam2 * (x - self.b).dot(u) / x.dist(self.b)
    }

    /// Parameter bracket containing the minimizer: the two feet, widened by 10%.
    pub fn bracket(&self) -> (f64, f64) {
        let [l0, l1] = self.line;
        let ta = line_param(self.a, l0, l1);
        let tb = line_param(self.b, l0, l1);
        let (lo, hi) = (ta.min(tb), ta.max(tb));
        let pad = 0.1 * (hi - lo) + 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        (lo - pad, hi + pad)
    }
}

/// Golden-section search on the bank, finished by bisection on the sign of
/// the slope (which is increasing) to reach full precision.
pub fn solve_river(inst: &RiverInstance) -> Result<RiverSolution> {
    inst.validate()?;
    let (lo, hi) = inst.bracket();
    let s0 = golden_section_on(lo, hi, |s| inst.cost_at(inst.point_at(s)));
    let width = (hi - lo) * 1e-6;
    let (mut a, mut b) = ((s0 - width).max(lo), (s0 + width).min(hi));
    if inst.slope(a) > 0.0 || inst.slope(b) < 0.0 {
        a = lo;
        b = hi;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if inst.slope(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    let s = 0.5 * (a + b);
    let x = inst.point_at(s);
    let u = (inst.line[1] - inst.line[0]).normalized();
    let sin_a = (inst.a - x).dot(u).abs() / inst.a.dist(x);
    let sin_b = (inst.b - x).dot(u).abs() / inst.b.dist(x);
    let snell_residual = if sin_a == 0.0 && sin_b == 0.0 {
        0.0
    } else {
        (sin_b / sin_a - inst.lam1 / inst.lam2).abs()
    };
    Ok(RiverSolution {
        x,
        cost: inst.cost_at(x),
        snell_residual,
        gradient: inst.slope(s).abs(),
    })
}

fn golden_section_on(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    crate::optimize::golden_section(lo, hi, (hi - lo) * 1e-10, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snell_reflect_bends_by_ratio() {
        let n = Point2::new(0.0, 1.0);
        let d = Point2::new(0.8, -0.6);
        let out = snell_reflect(d, n, 2.0).unwrap();
        assert!((out.x - 0.4).abs() < 1e-15);
        assert!(out.y > 0.0);
        assert!((out.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            snell_reflect(d, n, 0.5),
            Err(Error::TotalInternalReflection { .. })
        ));
    }

    #[test]
    fn ratio_one_is_mirror() {
        let n = Point2::new(0.0, 1.0);
        let d = Point2::new(0.8, -0.6);
        let out = snell_reflect(d, n, 1.0).unwrap();
        assert!((out - Point2::new(0.8, 0.6)).norm() < 1e-15);
    }

    #[test]
    fn river_symmetric_case() {
        let inst = RiverInstance {
            a: Point2::new(-1.0, 1.0),
            b: Point2::new(1.0, 1.0),
            line: [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)],
            lam1: 1.0,
            lam2: 1.0,
        };
        let s = solve_river(&inst).unwrap();
        assert!(s.x.dist(Point2::new(0.0, 0.0)) < 1e-12);
        assert!((s.cost - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn river_weighted_case_satisfies_snell() {
        let inst = RiverInstance {
            a: Point2::new(-1.0, 2.0),
            b: Point2::new(3.0, 0.5),
            line: [Point2::new(0.0, 0.0), Point2::new(1.0, 0.1)],
            lam1: 2.5,
            lam2: 1.0,
        };
        let s = solve_river(&inst).unwrap();
        assert!(s.snell_residual < 1e-8, "{s:?}");
        for ds in [-1e-4, 1e-4] {
            let y = s.x + (inst.line[1] - inst.line[0]).normalized() * ds;
            assert!(inst.cost_at(y) >= s.cost);
        }
    }

    #[test]
    fn river_rejects_opposite_banks() {
        let inst = RiverInstance {
            a: Point2::new(0.0, 1.0),
            b: Point2::new(1.0, -1.0),
            line: [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)],
            lam1: 1.0,
            lam2: 1.0,
        };
        assert!(matches!(solve_river(&inst), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mirror_billiard_fagnano_orbit_is_periodic() {
        let tri = Triangle::from_sides(4.0, 5.0, 6.0).unwrap();
        let k = RefractionCoeffs::new(1.0, 1.0, 1.0).unwrap();
        let [a, b, c] = tri.vertices();
        let [ha, hb] = [
            crate::geometry::foot_of_perpendicular(a, b, c).unwrap(),
            crate::geometry::foot_of_perpendicular(b, c, a).unwrap(),
        ];
        let ta = line_param(ha, b, c);
        let start = BilliardState::toward(&tri, Side::A, ta, hb).unwrap();
        assert!(is_periodic(&start, &tri, &k, 3, 1e-9).unwrap());
    }

    #[test]
    fn vertex_hit_reported_with_step() {
        let tri = Triangle::from_sides(1.0, 1.0, 1.0).unwrap();
        let k = RefractionCoeffs::new(1.0, 1.0, 1.0).unwrap();
        let start = BilliardState::toward(&tri, Side::A, 0.5, tri.a()).unwrap();
        let err = simulate(&start, &tri, &k, 5, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::Dynamics { step: 1, ref source } if **source == Error::HitVertex));
    }
}
