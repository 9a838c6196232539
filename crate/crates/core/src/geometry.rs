//! Planar primitives: points, signed areas, perpendicular feet and the
//! reference triangle.
//!
//! Sides are named after the opposite vertex and oriented along the
//! counterclockwise boundary: side `a` runs from B to C, `b` from C to A and
//! `c` from A to B. Points on a side are addressed by the affine parameter
//! along that orientation, so the interior is always on the left.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

/// Displacements share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Point2::new(-self.y, self.x)
    }

    /// Counterclockwise rotation by `angle` radians.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        self.lerp(other, 0.5)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Point2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    fn div(self, rhs: f64) -> Point2 {
        Point2::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Half the cross product of `q - p` and `r - p`; positive iff counterclockwise.
pub fn signed_area(p: Point2, q: Point2, r: Point2) -> f64 {
    0.5 * (q - p).cross(r - p)
}

/// Intersection of the lines `p1p2` and `q1q2`, `None` when parallel.
pub fn line_intersection(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> Option<Point2> {
    let d1 = p2 - p1;
    let d2 = q2 - q1;
    let denom = d1.cross(d2);
    let scale = d1.norm() * d2.norm();
    if denom.abs() <= 1e-14 * scale || scale == 0.0 {
        return None;
    }
    let t = (q1 - p1).cross(d2) / denom;
    Some(p1 + d1 * t)
}

/// Distance from `p` to the line through `q1`, `q2`.
pub fn distance_to_line(p: Point2, q1: Point2, q2: Point2) -> f64 {
    let d = q2 - q1;
    (p - q1).cross(d).abs() / d.norm()
}

/// Orthogonal projection of `p` onto the line through `q1` and `q2`.
pub fn foot_of_perpendicular(p: Point2, q1: Point2, q2: Point2) -> Result<Point2> {
    let d = q2 - q1;
    let len_sq = d.norm_sq();
    let scale = p.norm().max(q1.norm()).max(q2.norm()).max(1.0);
    if len_sq.sqrt() <= 1e-12 * scale {
        return Err(Error::DegenerateLine);
    }
    let t = (p - q1).dot(d) / len_sq;
    Ok(q1 + d * t)
}

/// Affine parameter of the projection of `p` onto the line `q1q2` (0 at `q1`, 1 at `q2`).
pub fn line_param(p: Point2, q1: Point2, q2: Point2) -> f64 {
    let d = q2 - q1;
    (p - q1).dot(d) / d.norm_sq()
}

/// A side of the reference triangle, named after its opposite vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
    C,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::A, Side::B, Side::C];

    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
            Side::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Side {
        Side::ALL[i % 3]
    }

    /// The side met next along a counterclockwise orbit (a → b → c → a).
    pub fn next(self) -> Side {
        Side::from_index(self.index() + 1)
    }

    pub fn prev(self) -> Side {
        Side::from_index(self.index() + 2)
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Side::A => "a (BC)",
            Side::B => "b (CA)",
            Side::C => "c (AB)",
        };
        f.write_str(name)
    }
}

/// Reference triangle with counterclockwise vertices A, B, C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    vertices: [Point2; 3],
    sides: [f64; 3],
    angles: [f64; 3],
    area: f64,
    reoriented: bool,
}

impl Triangle {
    /// Builds a triangle from its vertices, swapping B and C when the input
    /// is clockwise.
    pub fn new(a: Point2, b: Point2, c: Point2) -> Result<Self> {
        Self::with_tolerances(a, b, c, &Tolerances::default())
    }

    pub fn with_tolerances(a: Point2, b: Point2, c: Point2, tol: &Tolerances) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidInput("non-finite vertex".into()));
        }
        let area = signed_area(a, b, c);
        let diameter = a.dist(b).max(b.dist(c)).max(c.dist(a));
        if area.abs() <= tol.eps_degenerate * diameter * diameter || diameter == 0.0 {
            return Err(Error::DegenerateTriangle { area });
        }
        let (vertices, reoriented) = if area > 0.0 {
            ([a, b, c], false)
        } else {
            ([a, c, b], true)
        };
        Ok(Self::from_ccw(vertices, reoriented))
    }

    fn from_ccw(vertices: [Point2; 3], reoriented: bool) -> Self {
        let [a, b, c] = vertices;
        let sides = [b.dist(c), c.dist(a), a.dist(b)];
        let corner = |p: Point2, q: Point2, r: Point2| {
            let u = q - p;
            let v = r - p;
            u.cross(v).abs().atan2(u.dot(v))
        };
        let angles = [corner(a, b, c), corner(b, c, a), corner(c, a, b)];
        Triangle {
            vertices,
            sides,
            angles,
            area: signed_area(a, b, c),
            reoriented,
        }
    }

    /// Canonical placement: B at the origin, C on the positive x-axis, A above.
    pub fn from_sides(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::from_sides_with_tolerances(a, b, c, &Tolerances::default())
    }

    pub fn from_sides_with_tolerances(a: f64, b: f64, c: f64, tol: &Tolerances) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "side lengths must be positive and finite, got ({a}, {b}, {c})"
            )));
        }
        let heron16 = heron_product(a, b, c);
        let max = a.max(b).max(c);
        // 16·area² against the degeneracy threshold on area/diameter².
        let min_area = tol.eps_degenerate * max * max;
        if heron16 <= 16.0 * min_area * min_area {
            return Err(Error::TriangleInequalityViolated(a, b, c));
        }
        let area = 0.25 * heron16.sqrt();
        let x = (c * c + a * a - b * b) / (2.0 * a);
        let y = 2.0 * area / a;
        let tri = Self::from_ccw(
            [Point2::new(x, y), Point2::ORIGIN, Point2::new(a, 0.0)],
            false,
        );
        Ok(tri)
    }

    pub fn vertices(&self) -> [Point2; 3] {
        self.vertices
    }

    pub fn a(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn b(&self) -> Point2 {
        self.vertices[1]
    }

    pub fn c(&self) -> Point2 {
        self.vertices[2]
    }

    /// Vertex opposite the given side.
    pub fn vertex(&self, side: Side) -> Point2 {
        self.vertices[side.index()]
    }

    /// Side lengths `[a, b, c]`.
    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    pub fn side_length(&self, side: Side) -> f64 {
        self.sides[side.index()]
    }

    /// Interior angles `[α, β, γ]` at A, B, C.
    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn diameter(&self) -> f64 {
        self.sides[0].max(self.sides[1]).max(self.sides[2])
    }

    /// True when the input vertices were clockwise and B, C were swapped.
    pub fn reoriented(&self) -> bool {
        self.reoriented
    }

    pub fn centroid(&self) -> Point2 {
        let [a, b, c] = self.vertices;
        (a + b + c) / 3.0
    }

    /// Oriented endpoints of a side (interior on the left).
    pub fn side_endpoints(&self, side: Side) -> (Point2, Point2) {
        let i = side.index();
        (self.vertices[(i + 1) % 3], self.vertices[(i + 2) % 3])
    }

    pub fn point_on_side(&self, side: Side, t: f64) -> Point2 {
        let (p, q) = self.side_endpoints(side);
        p.lerp(q, t)
    }

    /// Unit normal of a side pointing into the triangle.
    pub fn inward_normal(&self, side: Side) -> Vec2 {
        let (p, q) = self.side_endpoints(side);
        (q - p).normalized().perp()
    }

    /// Signed distance from `p` to the side line, positive on the interior side.
    pub fn signed_distance(&self, p: Point2, side: Side) -> f64 {
        let (q1, q2) = self.side_endpoints(side);
        (q2 - q1).cross(p - q1) / self.side_length(side)
    }

    pub fn is_acute(&self) -> bool {
        self.angles.iter().all(|&a| a < std::f64::consts::FRAC_PI_2)
    }
}

/// 16·area² in the numerically stable product form (Kahan's ordering);
/// negative when the lengths violate the triangle inequality.
pub fn heron_product(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
}

/// Triangle with one vertex on each side line of the reference triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InscribedTriangle {
    /// `[A', B', C']` on sides a, b, c.
    pub points: [Point2; 3],
    /// Affine parameters of the points along the oriented sides.
    pub params: [f64; 3],
}

impl InscribedTriangle {
    pub fn from_params(tri: &Triangle, params: [f64; 3]) -> Self {
        let points = [
            tri.point_on_side(Side::A, params[0]),
            tri.point_on_side(Side::B, params[1]),
            tri.point_on_side(Side::C, params[2]),
        ];
        Self { points, params }
    }

    /// Wraps points already on the side lines, recovering their parameters.
    pub fn from_points(tri: &Triangle, points: [Point2; 3]) -> Self {
        let mut params = [0.0; 3];
        for side in Side::ALL {
            let (p, q) = tri.side_endpoints(side);
            params[side.index()] = line_param(points[side.index()], p, q);
        }
        Self { points, params }
    }

    pub fn point(&self, side: Side) -> Point2 {
        self.points[side.index()]
    }

    /// Chord lengths `[|B'C'|, |C'A'|, |A'B'|]`, i.e. the chord facing each vertex.
    pub fn chords(&self) -> [f64; 3] {
        let [pa, pb, pc] = self.points;
        [pb.dist(pc), pc.dist(pa), pa.dist(pb)]
    }

    pub fn perimeter(&self) -> f64 {
        self.chords().iter().sum()
    }

    pub fn area(&self) -> f64 {
        let [pa, pb, pc] = self.points;
        signed_area(pa, pb, pc)
    }

    /// All parameters strictly inside `(0, 1)`.
    pub fn is_strictly_inscribed(&self) -> bool {
        self.params.iter().all(|&t| t > 0.0 && t < 1.0)
    }
}

/// Feet of the perpendiculars from `p` on the three side lines.
pub fn pedal_triangle(p: Point2, tri: &Triangle) -> InscribedTriangle {
    let mut params = [0.0; 3];
    for side in Side::ALL {
        let (q1, q2) = tri.side_endpoints(side);
        params[side.index()] = line_param(p, q1, q2);
    }
    InscribedTriangle::from_params(tri, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Altitude {
    /// Foot on the opposite side line.
    pub foot: Point2,
    pub length: f64,
    /// Parameter of the foot along the opposite side.
    pub param: f64,
}

/// Altitudes from A, B, C (indexed like the opposite sides).
pub fn altitudes(tri: &Triangle) -> [Altitude; 3] {
    Side::ALL.map(|side| {
        let (q1, q2) = tri.side_endpoints(side);
        let v = tri.vertex(side);
        let param = line_param(v, q1, q2);
        Altitude {
            foot: q1.lerp(q2, param),
            length: 2.0 * tri.area() / tri.side_length(side),
            param,
        }
    })
}
