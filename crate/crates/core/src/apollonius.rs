//! Apollonian circles of vertex pairs, their common points, and the
//! tilde triangle `(λA·a, λB·b, λC·c)` whose existence decides whether the
//! circles meet.

use serde::{Deserialize, Serialize};

use crate::construction::Weights;
use crate::error::{Error, Result};
use crate::geometry::{heron_product, Point2, Triangle, Vec2};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

/// Shape of the locus `d(P, base1) / d(P, base2) = ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Locus {
    Circle(Circle),
    /// Perpendicular bisector of the base segment (ratio 1).
    Bisector { point: Point2, direction: Vec2 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApollonianCircle {
    pub base1: Point2,
    pub base2: Point2,
    pub ratio: f64,
    pub locus: Locus,
}

impl ApollonianCircle {
    /// Point of the segment dividing it internally in the ratio `r : 1`.
    pub fn internal_point(&self) -> Point2 {
        (self.base1 + self.base2 * self.ratio) / (1.0 + self.ratio)
    }

    /// External division point; absent for the bisector.
    pub fn external_point(&self) -> Option<Point2> {
        match self.locus {
            Locus::Circle(_) => Some((self.base1 - self.base2 * self.ratio) / (1.0 - self.ratio)),
            Locus::Bisector { .. } => None,
        }
    }

    /// Relative deviation of `d(p, base1) / d(p, base2)` from the ratio.
    pub fn ratio_residual(&self, p: Point2) -> f64 {
        let d1 = p.dist(self.base1);
        let d2 = p.dist(self.base2);
        (d1 - self.ratio * d2).abs() / (self.ratio * d2).max(d1).max(f64::MIN_POSITIVE)
    }
}

/// The locus of points whose distances to `p1` and `p2` are in ratio `r`.
pub fn apollonian_circle(p1: Point2, p2: Point2, r: f64) -> Result<ApollonianCircle> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("ratio must be positive, got {r}")));
    }
    let base = p2 - p1;
    if base.norm() <= 1e-12 * p1.norm().max(p2.norm()).max(1.0) {
        return Err(Error::DegenerateLine);
    }
    let locus = if (r - 1.0).abs() < 1e-12 {
        Locus::Bisector {
            point: p1.midpoint(p2),
            direction: base.perp().normalized(),
        }
    } else {
        let m = (p1 + p2 * r) / (1.0 + r);
        let n = (p1 - p2 * r) / (1.0 - r);
        Locus::Circle(Circle {
            center: m.midpoint(n),
            radius: 0.5 * m.dist(n),
        })
    };
    Ok(ApollonianCircle {
        base1: p1,
        base2: p2,
        ratio: r,
        locus,
    })
}

pub fn circumcircle(tri: &Triangle) -> Circle {
    let a = tri.a();
    let b = tri.b() - a;
    let c = tri.c() - a;
    let d = 2.0 * b.cross(c);
    let (b2, c2) = (b.norm_sq(), c.norm_sq());
    let u = Point2::new((c.y * b2 - b.y * c2) / d, (b.x * c2 - c.x * b2) / d);
    Circle {
        center: a + u,
        radius: u.norm(),
    }
}

/// Triangle with sides `(λA·a, λB·b, λC·c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeTriangle {
    pub sides: [f64; 3],
    /// `[α̃, β̃, γ̃]` opposite the corresponding sides, when the triangle exists.
    pub angles: Option<[f64; 3]>,
    pub exists: bool,
}

impl TildeTriangle {
    /// Smallest relative triangle-inequality slack `(sum of others − side) / max side`.
    /// Negative when the inequality fails, zero for a flat triangle.
    pub fn slack(&self) -> f64 {
        let [a, b, c] = self.sides;
        let max = a.max(b).max(c);
        ((b + c - a).min(c + a - b).min(a + b - c)) / max
    }

    /// Index of the side that is at least the sum of the other two, if any.
    pub fn failing_side(&self) -> Option<usize> {
        let [a, b, c] = self.sides;
        let excess = [a - (b + c), b - (c + a), c - (a + b)];
        (0..3)
            .filter(|&i| excess[i] >= -1e-12 * a.max(b).max(c))
            .max_by(|&i, &j| excess[i].total_cmp(&excess[j]))
    }
}

pub fn tilde_triangle(tri: &Triangle, w: &Weights) -> TildeTriangle {
    let lam = w.as_array();
    let s = tri.sides();
    let sides = [lam[0] * s[0], lam[1] * s[1], lam[2] * s[2]];
    let heron = heron_product(sides[0], sides[1], sides[2]);
    let max = sides[0].max(sides[1]).max(sides[2]);
    let exists = heron > 1e-12 * max.powi(4);
    let angles = exists.then(|| {
        let four_area = heron.sqrt();
        let [ta, tb, tc] = sides;
        let corner = |opp: f64, u: f64, v: f64| four_area.atan2(u * u + v * v - opp * opp);
        [corner(ta, tb, tc), corner(tb, tc, ta), corner(tc, ta, tb)]
    });
    TildeTriangle {
        sides,
        angles,
        exists,
    }
}

/// The three Apollonian circles `⊙_{A,B}(λA/λB)`, `⊙_{B,C}(λB/λC)`, `⊙_{C,A}(λC/λA)`.
pub fn weight_circles(tri: &Triangle, w: &Weights) -> Result<[ApollonianCircle; 3]> {
    let [la, lb, lc] = w.as_array();
    let [a, b, c] = tri.vertices();
    Ok([
        apollonian_circle(a, b, la / lb)?,
        apollonian_circle(b, c, lb / lc)?,
        apollonian_circle(c, a, lc / la)?,
    ])
}

/// Points whose vertex distances are proportional to the weights.
///
/// Intersects the first two weight circles and checks every result against
/// the third; a miss is reported as an error since it cannot happen for a
/// correct intersection.
pub fn apollonian_common_points(
    tri: &Triangle,
    w: &Weights,
    tol: &Tolerances,
) -> Result<Vec<Point2>> {
    let [first, second, third] = weight_circles(tri, w)?;
    let (points, tangent) = intersect_loci(&first.locus, &second.locus, tol.tangency);
    // A tangency snaps to the radical-line foot; allow the matching slack.
    let limit = if tangent {
        tol.tangency.sqrt()
    } else {
        tol.validation
    };
    for p in &points {
        let residual = third.ratio_residual(*p);
        if residual > limit {
            return Err(Error::ThirdCircleMissed { residual });
        }
    }
    Ok(points)
}

/// Common points of two loci, and whether they touch tangentially.
pub fn intersect_loci(first: &Locus, second: &Locus, tangency: f64) -> (Vec<Point2>, bool) {
    match (first, second) {
        (Locus::Circle(c1), Locus::Circle(c2)) => circle_circle(c1, c2, tangency),
        (Locus::Circle(c), Locus::Bisector { point, direction })
        | (Locus::Bisector { point, direction }, Locus::Circle(c)) => {
            line_circle(*point, *direction, c, tangency)
        }
        (
            Locus::Bisector {
                point: p1,
                direction: d1,
            },
            Locus::Bisector {
                point: p2,
                direction: d2,
            },
        ) => {
            let hit = crate::geometry::line_intersection(*p1, *p1 + *d1, *p2, *p2 + *d2);
            (hit.into_iter().collect(), false)
        }
    }
}

fn circle_circle(c1: &Circle, c2: &Circle, tangency: f64) -> (Vec<Point2>, bool) {
    let axis = c2.center - c1.center;
    let d = axis.norm();
    if d == 0.0 {
        return (Vec::new(), false);
    }
    // distance from c1 along the axis to the radical line
    let along = (c1.radius * c1.radius - c2.radius * c2.radius + d * d) / (2.0 * d);
    let h2 = c1.radius * c1.radius - along * along;
    let unit = axis / d;
    let foot = c1.center + unit * along;
    split_chord(foot, unit.perp(), h2, c1.radius.min(c2.radius), tangency)
}

fn line_circle(point: Point2, direction: Vec2, c: &Circle, tangency: f64) -> (Vec<Point2>, bool) {
    let dir = direction.normalized();
    let foot = point + dir * (c.center - point).dot(dir);
    let h2 = c.radius * c.radius - (c.center - foot).norm_sq();
    split_chord(foot, dir, h2, c.radius, tangency)
}

fn split_chord(
    foot: Point2,
    dir: Vec2,
    h2: f64,
    radius: f64,
    tangency: f64,
) -> (Vec<Point2>, bool) {
    let band = tangency * radius * radius;
    if h2 < -band {
        (Vec::new(), false)
    } else if h2 <= band {
        (vec![foot], true)
    } else {
        let h = h2.sqrt();
        (vec![foot + dir * h, foot - dir * h], false)
    }
}
