//! Homogeneous coordinates relative to a reference triangle.
//!
//! Triples are stored as given; normalization happens only when a
//! Cartesian point is needed. The tripolar conversion solves for the common
//! scale `s` of the distances `(X s, Y s, Z s)` in closed form and then
//! re-validates every candidate against the requested distances, since a
//! tripolar triple can describe zero, one or two points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{heron_product, Point2, Side, Triangle};
use crate::tolerance::Tolerances;

/// Barycentric triple `(ρa : ρb : ρc)`, proportional to `[PBC], [PCA], [PAB]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Barycentric(pub [f64; 3]);

/// Trilinear triple `(la : lb : lc)`, proportional to signed distances to the sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trilinear(pub [f64; 3]);

/// Tripolar triple `(rA : rB : rC)`, proportional to distances to the vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tripolar(pub [f64; 3]);

fn max_abs(v: &[f64; 3]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn check_triple(v: &[f64; 3], what: &str) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} coordinates must be finite")));
    }
    if max_abs(v) == 0.0 {
        return Err(Error::InvalidInput(format!("{what} coordinates are all zero")));
    }
    Ok(())
}

impl Barycentric {
    pub fn new(rho: [f64; 3]) -> Result<Self> {
        check_triple(&rho, "barycentric")?;
        Ok(Self(rho))
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Scaled so the components sum to one.
    pub fn normalized(&self) -> Result<Self> {
        let s = self.sum();
        if s.abs() <= 1e-12 * max_abs(&self.0) || s == 0.0 {
            return Err(Error::IdealPoint);
        }
        Ok(Self(self.0.map(|x| x / s)))
    }

    /// All normalized components strictly greater than `margin`.
    pub fn is_interior(&self, margin: f64) -> bool {
        self.normalized()
            .map(|n| n.0.iter().all(|&x| x > margin))
            .unwrap_or(false)
    }
}

impl Trilinear {
    pub fn new(l: [f64; 3]) -> Result<Self> {
        check_triple(&l, "trilinear")?;
        Ok(Self(l))
    }

    /// Scaled so the components sum to one (sign-preserving).
    pub fn normalized(&self) -> Result<Self> {
        let s: f64 = self.0.iter().sum();
        if s.abs() <= 1e-12 * max_abs(&self.0) || s == 0.0 {
            return Err(Error::IdealPoint);
        }
        Ok(Self(self.0.map(|x| x / s)))
    }
}

impl Tripolar {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        check_triple(&r, "tripolar")?;
        if r.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidInput(
                "tripolar coordinates must be non-negative".into(),
            ));
        }
        Ok(Self(r))
    }

    /// Scaled so the components sum to one.
    pub fn normalized(&self) -> Self {
        let s: f64 = self.0.iter().sum();
        Self(self.0.map(|x| x / s))
    }
}

/// Normalized barycentric coordinates from signed areas.
pub fn to_barycentric(p: Point2, tri: &Triangle) -> Barycentric {
    let total = tri.area();
    Barycentric(Side::ALL.map(|side| {
        let (q1, q2) = tri.side_endpoints(side);
        crate::geometry::signed_area(p, q1, q2) / total
    }))
}

pub fn from_barycentric(bc: &Barycentric, tri: &Triangle) -> Result<Point2> {
    let [ra, rb, rc] = bc.normalized()?.0;
    let [a, b, c] = tri.vertices();
    Ok(a * ra + b * rb + c * rc)
}

/// Exact signed distances to the side lines (positive inside).
pub fn to_trilinear(p: Point2, tri: &Triangle) -> Trilinear {
    Trilinear(Side::ALL.map(|side| tri.signed_distance(p, side)))
}

pub fn trilinear_to_barycentric(tl: &Trilinear, tri: &Triangle) -> Barycentric {
    let [a, b, c] = tri.sides();
    Barycentric([a * tl.0[0], b * tl.0[1], c * tl.0[2]])
}

pub fn barycentric_to_trilinear(bc: &Barycentric, tri: &Triangle) -> Trilinear {
    let [a, b, c] = tri.sides();
    Trilinear([bc.0[0] / a, bc.0[1] / b, bc.0[2] / c])
}

/// Distances to the three vertices.
pub fn tripolar_of_point(p: Point2, tri: &Triangle) -> Tripolar {
    Tripolar(tri.vertices().map(|v| p.dist(v)))
}

/// Isogonal conjugate: componentwise inversion of the trilinear triple.
///
/// Undefined on the side lines, where a trilinear component vanishes.
pub fn isogonal_conjugate(bc: &Barycentric, tri: &Triangle) -> Result<Barycentric> {
    let tl = barycentric_to_trilinear(bc, tri);
    let scale = max_abs(&tl.0);
    for side in Side::ALL {
        if tl.0[side.index()].abs() <= 1e-12 * scale {
            return Err(Error::OnSideLine(side));
        }
    }
    Ok(trilinear_to_barycentric(&Trilinear(tl.0.map(|l| 1.0 / l)), tri))
}

/// Cartesian convenience wrapper around [`isogonal_conjugate`].
pub fn isogonal_conjugate_point(p: Point2, tri: &Triangle) -> Result<Point2> {
    let image = isogonal_conjugate(&to_barycentric(p, tri), tri)?;
    from_barycentric(&image, tri)
}

/// Conway-notation bookkeeping for a triangle and a scaled tripolar triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConwayData {
    /// `S_a = (b² + c² − a²)/2` and cyclic.
    pub s: [f64; 3],
    pub area: f64,
    /// Sides `(X a, Y b, Z c)` of the tilde triangle.
    pub tilde_sides: [f64; 3],
    /// `S_ã = ((Y b)² + (Z c)² − (X a)²)/2` and cyclic.
    pub s_tilde: [f64; 3],
    /// Signed Heron product `16 [△̃]²`; negative when the tilde triangle does not exist.
    pub tilde_heron: f64,
    pub tilde_exists: bool,
    pub tilde_area: Option<f64>,
    /// `F = X² S_ã + Y² S_b̃ + Z² S_c̃ − (a²Y²Z² + b²X²Z² + c²X²Y²)`.
    ///
    /// Reported for reference only; the roots below do not depend on it.
    pub f: f64,
    /// Leading coefficient `q₂ = |X²(C−B) + Y²(A−C) + Z²(B−A)|²` of the scale quadratic.
    pub quad_lead: f64,
    /// `m = a² S_a X² + b² S_b Y² + c² S_c Z²`.
    pub quad_mid: f64,
    /// `s² = (abc)² / (m − 8[△][△̃])`, the larger root.
    pub s2_plus: Option<f64>,
    /// `s² = (abc)² / (m + 8[△][△̃])`, the smaller root.
    pub s2_minus: Option<f64>,
}

impl ConwayData {
    /// Barycentric line through both candidates, evaluated at `s²`
    /// (normalized: the components sum to one identically).
    pub fn barycentric_at(&self, tri: &Triangle, tp: [f64; 3], s2: f64) -> Barycentric {
        let (alpha, beta, gamma) = scale_line(tri, tp);
        let denom = 8.0 * self.area * self.area;
        Barycentric([
            (alpha.0 + alpha.1 * s2) / denom,
            (beta.0 + beta.1 * s2) / denom,
            (gamma.0 + gamma.1 * s2) / denom,
        ])
    }
}

/// Coefficients `(α₀, α₁), (β₀, β₁), (γ₀, γ₁)` of `ρ = ρ₀ + ρ₁ s²` (times 8[△]²).
fn scale_line(tri: &Triangle, tp: [f64; 3]) -> ((f64, f64), (f64, f64), (f64, f64)) {
    let [a, b, c] = tri.sides();
    let [sa, sb, sc] = conway_s(a, b, c);
    let [x2, y2, z2] = tp.map(|v| v * v);
    (
        (a * a * sa, sc * y2 + sb * z2 - a * a * x2),
        (b * b * sb, sa * z2 + sc * x2 - b * b * y2),
        (c * c * sc, sb * x2 + sa * y2 - c * c * z2),
    )
}

fn conway_s(a: f64, b: f64, c: f64) -> [f64; 3] {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    [
        (b2 + c2 - a2) / 2.0,
        (c2 + a2 - b2) / 2.0,
        (a2 + b2 - c2) / 2.0,
    ]
}

pub fn conway_data(tri: &Triangle, x: f64, y: f64, z: f64) -> Result<ConwayData> {
    let tp = Tripolar::new([x, y, z])?;
    let [x, y, z] = tp.0;
    let [a, b, c] = tri.sides();
    let s = conway_s(a, b, c);
    let area = tri.area();
    let tilde_sides = [x * a, y * b, z * c];
    let [ta, tb, tc] = tilde_sides;
    let s_tilde = conway_s(ta, tb, tc);
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let (a2, b2, c2) = (a * a, b * b, c * c);

    let f = (x2 * s_tilde[0] + y2 * s_tilde[1] + z2 * s_tilde[2])
        - (a2 * y2 * z2 + x2 * b2 * z2 + x2 * y2 * c2);

    let [va, vb, vc] = [tri.c() - tri.b(), tri.a() - tri.c(), tri.b() - tri.a()];
    let quad_lead = (va * x2 + vb * y2 + vc * z2).norm_sq();
    let quad_mid = a2 * s[0] * x2 + b2 * s[1] * y2 + c2 * s[2] * z2;

    let max_tilde = ta.max(tb).max(tc);
    let mut tilde_heron = heron_product(ta, tb, tc);
    if tilde_heron.abs() <= 1e-12 * max_tilde.powi(4) {
        tilde_heron = 0.0;
    }
    let tilde_exists = tilde_heron >= 0.0;
    let tilde_area = tilde_exists.then(|| 0.25 * tilde_heron.sqrt());

    let (s2_plus, s2_minus) = match tilde_area {
        Some(t_area) => {
            let abc2 = (a * b * c).powi(2);
            let shift = 8.0 * area * t_area;
            let band = 1e-12 * (quad_mid.abs() + shift);
            let root = |d: f64| (d.abs() > band).then(|| abc2 / d);
            let plus = root(quad_mid - shift);
            let minus = root(quad_mid + shift);
            if plus.is_none() && minus.is_none() {
                return Err(Error::SingularConversion);
            }
            (plus, minus)
        }
        None => (None, None),
    };

    Ok(ConwayData {
        s,
        area,
        tilde_sides,
        s_tilde,
        tilde_heron,
        tilde_exists,
        tilde_area,
        f,
        quad_lead,
        quad_mid,
        s2_plus,
        s2_minus,
    })
}

/// A Cartesian point realizing a tripolar triple, with the distance scale `s`
/// such that the vertex distances are `(X s, Y s, Z s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripolarPoint {
    pub point: Point2,
    pub scale: f64,
    pub barycentric: Barycentric,
}

/// All points (zero, one or two) with the given tripolar coordinates.
pub fn tripolar_to_points(
    tp: &Tripolar,
    tri: &Triangle,
    tol: &Tolerances,
) -> Result<Vec<TripolarPoint>> {
    let tp = Tripolar::new(tp.0)?;
    let r = tp.0;
    let max = max_abs(&r);
    let zeros: Vec<usize> = (0..3).filter(|&i| r[i] <= f64::EPSILON * max).collect();
    match zeros.len() {
        0 => {}
        1 => return vertex_candidate(zeros[0], r, tri, tol),
        _ => return Err(Error::NoSuchPoint),
    }

    let cd = conway_data(tri, r[0], r[1], r[2])?;
    if !cd.tilde_exists {
        return Err(Error::NoSuchPoint);
    }

    let mut found: Vec<TripolarPoint> = Vec::with_capacity(2);
    for s2 in [cd.s2_minus, cd.s2_plus].into_iter().flatten() {
        if !(s2 >= 0.0 && s2.is_finite()) {
            continue;
        }
        let bc = cd.barycentric_at(tri, r, s2);
        let Ok(point) = from_barycentric(&bc, tri) else {
            continue;
        };
        let scale = s2.sqrt();
        if !validates(point, r, scale, tri, tol) {
            continue;
        }
        let dup = found
            .iter()
            .any(|q| q.point.dist(point) <= tol.validation * tri.diameter().max(scale * max));
        if !dup {
            found.push(TripolarPoint {
                point,
                scale,
                barycentric: bc.normalized()?,
            });
        }
    }
    if found.is_empty() {
        Err(Error::NoSuchPoint)
    } else {
        Ok(found)
    }
}

fn validates(p: Point2, r: [f64; 3], scale: f64, tri: &Triangle, tol: &Tolerances) -> bool {
    let reach = tri.diameter().max(scale * max_abs(&r));
    tri.vertices()
        .iter()
        .zip(r)
        .all(|(v, ri)| (p.dist(*v) - ri * scale).abs() <= tol.validation * reach)
}

fn vertex_candidate(
    i: usize,
    r: [f64; 3],
    tri: &Triangle,
    tol: &Tolerances,
) -> Result<Vec<TripolarPoint>> {
    let v = tri.vertices()[i];
    let j = (i + 1) % 3;
    let scale = v.dist(tri.vertices()[j]) / r[j];
    if !validates(v, r, scale, tri, tol) {
        return Err(Error::NoSuchPoint);
    }
    let mut rho = [0.0; 3];
    rho[i] = 1.0;
    Ok(vec![TripolarPoint {
        point: v,
        scale,
        barycentric: Barycentric(rho),
    }])
}

/// Coefficients `[A₂, A₁, A₀]` of the quadratic in `s²` obtained by
/// substituting the barycentric line into the Apollonian locus of a vertex
/// pair with ratio `k`.
///
/// The pair (B, C) with `k = Y/Z` is used unless `Z = 0`, in which case the
/// labels are rotated so that the ratio stays finite.
pub fn apollonian_biquadratic(tri: &Triangle, tp: &Tripolar) -> Result<[f64; 3]> {
    let r = tp.0;
    let rot = if r[2] > 0.0 {
        0
    } else if r[0] > 0.0 {
        1
    } else if r[1] > 0.0 {
        2
    } else {
        return Err(Error::NoSuchPoint);
    };
    let sides = tri.sides();
    let pick = |v: [f64; 3]| [v[rot], v[(rot + 1) % 3], v[(rot + 2) % 3]];
    let [a, b, c] = pick(sides);
    let [x, y, z] = pick(r);
    let [_, sb, sc] = conway_s(a, b, c);
    let rotated = rotated_triangle(tri, rot);
    let ((a0, a1), (b0, b1), (g0, g1)) = scale_line(&rotated, [x, y, z]);
    let k2 = (y / z).powi(2);
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let lead = c2 - k2 * b2;
    let quad2 = lead * a1 * a1 + a2 * (g1 * g1 - k2 * b1 * b1) + 2.0 * sb * a1 * g1
        - 2.0 * k2 * sc * a1 * b1;
    let quad1 = 2.0 * lead * a0 * a1
        + 2.0 * a2 * (g0 * g1 - k2 * b0 * b1)
        + 2.0 * sb * (a0 * g1 + a1 * g0)
        - 2.0 * k2 * sc * (a0 * b1 + a1 * b0);
    let quad0 = lead * a0 * a0 + a2 * (g0 * g0 - k2 * b0 * b0) + 2.0 * sb * a0 * g0
        - 2.0 * k2 * sc * a0 * b0;
    Ok([quad2, quad1, quad0])
}

/// Relative residual `|A₂u² + A₁u + A₀| / (|A₂|u² + |A₁|u + |A₀|)` at `u = s²`.
pub fn biquadratic_residual(coeffs: [f64; 3], s2: f64) -> f64 {
    let [q2, q1, q0] = coeffs;
    let value = q2 * s2 * s2 + q1 * s2 + q0;
    let scale = q2.abs() * s2 * s2 + q1.abs() * s2.abs() + q0.abs();
    if scale == 0.0 {
        0.0
    } else {
        value.abs() / scale
    }
}

fn rotated_triangle(tri: &Triangle, rot: usize) -> Triangle {
    if rot == 0 {
        return *tri;
    }
    let v = tri.vertices();
    // Cyclic relabeling keeps the orientation, so this cannot fail.
    Triangle::new(v[rot], v[(rot + 1) % 3], v[(rot + 2) % 3]).expect("rotation of a valid triangle")
}
