//! The weighted Fagnano point: erected similar triangles, concurrent cevians,
//! and the pedal orbit that minimizes `λA|B'C'| + λB|C'A'| + λC|A'B'|`.

use serde::{Deserialize, Serialize};

use crate::apollonius::{tilde_triangle, TildeTriangle};
use crate::coords::to_barycentric;
use crate::error::{Error, Result};
use crate::geometry::{
    altitudes, line_intersection, line_param, pedal_triangle, InscribedTriangle, Point2, Side,
    Triangle,
};
use crate::optimize::{minimize_inscribed, weighted_perimeter, MinimizeOptions, MinimizeReport};
use crate::tolerance::Tolerances;

/// Positive chord weights. `λA` multiplies `|B'C'|`, the chord facing A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub lam_a: f64,
    pub lam_b: f64,
    pub lam_c: f64,
}

impl Weights {
    pub fn new(lam_a: f64, lam_b: f64, lam_c: f64) -> Result<Self> {
        for (name, v) in [("lambda_a", lam_a), ("lambda_b", lam_b), ("lambda_c", lam_c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            lam_a,
            lam_b,
            lam_c,
        })
    }

    pub fn uniform() -> Self {
        Self {
            lam_a: 1.0,
            lam_b: 1.0,
            lam_c: 1.0,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.lam_a, self.lam_b, self.lam_c]
    }

    pub fn from_array(l: [f64; 3]) -> Result<Self> {
        Self::new(l[0], l[1], l[2])
    }

    pub fn scaled(&self, mu: f64) -> Result<Self> {
        Self::new(mu * self.lam_a, mu * self.lam_b, mu * self.lam_c)
    }

    pub fn reciprocal(&self) -> Self {
        Self {
            lam_a: 1.0 / self.lam_a,
            lam_b: 1.0 / self.lam_b,
            lam_c: 1.0 / self.lam_c,
        }
    }
}

/// Refraction coefficient of each side: the weight of the chord arriving at
/// the side over the weight of the chord leaving it, along `A' → B' → C'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefractionCoeffs {
    pub kap_a: f64,
    pub kap_b: f64,
    pub kap_c: f64,
}

impl RefractionCoeffs {
    pub fn new(kap_a: f64, kap_b: f64, kap_c: f64) -> Result<Self> {
        for v in [kap_a, kap_b, kap_c] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "refraction coefficients must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            kap_a,
            kap_b,
            kap_c,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.kap_a, self.kap_b, self.kap_c]
    }

    pub fn for_side(&self, side: Side) -> f64 {
        self.as_array()[side.index()]
    }

    pub fn product(&self) -> f64 {
        self.kap_a * self.kap_b * self.kap_c
    }

    /// Coefficients of the same orbit traversed clockwise.
    pub fn reciprocal(&self) -> Self {
        Self {
            kap_a: 1.0 / self.kap_a,
            kap_b: 1.0 / self.kap_b,
            kap_c: 1.0 / self.kap_c,
        }
    }
}

/// `κa = λB/λC`, `κb = λC/λA`, `κc = λA/λB`.
pub fn coeffs_from_weights(w: &Weights) -> RefractionCoeffs {
    RefractionCoeffs {
        kap_a: w.lam_b / w.lam_c,
        kap_b: w.lam_c / w.lam_a,
        kap_c: w.lam_a / w.lam_b,
    }
}

/// Weights realizing the given coefficients, normalized with `λA = 1`.
/// Requires `κa·κb·κc = 1` up to `tol`.
pub fn weights_from_coeffs(k: &RefractionCoeffs, tol: f64) -> Result<Weights> {
    let p = k.product();
    if (p - 1.0).abs() > tol {
        return Err(Error::InvalidInput(format!(
            "refraction coefficients must multiply to 1, got {p}"
        )));
    }
    Weights::new(1.0, k.kap_c.recip(), k.kap_b)
}

/// Erects `A1` on BC, `B1` on CA, `C1` on AB, outside the triangle, with
/// `△A1CB ∼ △B1AC ∼ △C1BA ∼ △Ã B̃ C̃`.
///
/// The base angle at the first endpoint of each oriented side is the tilde
/// angle of that endpoint, so e.g. `∠A1BC = β̃` and `∠BCA1 = γ̃`.
pub fn erect_similar(tri: &Triangle, tilde: &TildeTriangle) -> Result<[Point2; 3]> {
    let angles = tilde.angles.ok_or(Error::TildeDegenerate)?;
    let ts = tilde.sides;
    let s = tri.sides();
    Ok(Side::ALL.map(|side| {
        let i = side.index();
        let (p, q) = tri.side_endpoints(side);
        let len = s[i] * ts[(i + 2) % 3] / ts[i];
        p + (q - p).normalized().rotated(-angles[(i + 1) % 3]) * len
    }))
}

/// `[α+α̃ < π, β+β̃ < π, γ+γ̃ < π]`, each with margin `eps_angle`.
pub fn interior_conditions(tri: &Triangle, tilde: &TildeTriangle, tol: &Tolerances) -> Result<[bool; 3]> {
    let at = tilde.angles.ok_or(Error::TildeDegenerate)?;
    let a = tri.angles();
    Ok([0, 1, 2].map(|i| a[i] + at[i] < std::f64::consts::PI - tol.eps_angle))
}

fn angle_slack(tri: &Triangle, tilde: &TildeTriangle) -> Option<[f64; 3]> {
    let at = tilde.angles?;
    let a = tri.angles();
    Some([0, 1, 2].map(|i| std::f64::consts::PI - a[i] - at[i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitStatus {
    /// F is interior and its pedal triangle is inscribed: the Snell orbit.
    Interior,
    /// F is interior but a pedal foot falls beyond its side. Only happens
    /// in obtuse triangles; the minimizer over the closed sides is attached.
    PedalOutside,
    /// F is on the boundary or outside.
    Degenerate,
    NoTildeTriangle,
}

/// The doubled altitude from one vertex, a limit of inscribed triangles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AltitudeCandidate {
    pub vertex: Side,
    pub foot: Point2,
    pub length: f64,
    pub weighted_cost: f64,
    /// Foot lies on the closed opposite side.
    pub admissible: bool,
    pub orbit: InscribedTriangle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateFallback {
    pub candidates: [AltitudeCandidate; 3],
    /// Index of the admissible candidate with the least weighted cost.
    pub weighted_choice: usize,
    /// Index of the shortest altitude, ignoring weights.
    pub shortest_altitude: usize,
    pub brute_force: MinimizeReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnellOrbitResult {
    pub status: OrbitStatus,
    /// Common point F of the cevians, when they meet at a finite point.
    pub point: Option<Point2>,
    /// Pedal triangle of F when interior, the chosen doubled altitude otherwise.
    pub orbit: Option<InscribedTriangle>,
    pub weighted_perimeter: f64,
    pub erected: Option<[Point2; 3]>,
    pub conditions: Option<[bool; 3]>,
    pub tilde: TildeTriangle,
    pub concurrency_residual: Option<f64>,
    pub fallback: Option<DegenerateFallback>,
}

/// Runs the full construction and classifies the outcome.
pub fn snell_fagnano_point(tri: &Triangle, w: &Weights, tol: &Tolerances) -> Result<SnellOrbitResult> {
    let tilde = tilde_triangle(tri, w);
    if !tilde.exists {
        let mut res = degenerate_minimizer(tri, w)?;
        res.status = OrbitStatus::NoTildeTriangle;
        return Ok(res);
    }
    let erected = erect_similar(tri, &tilde)?;
    let conditions = interior_conditions(tri, &tilde, tol)?;
    let [a, b, c] = tri.vertices();
    let [a1, b1, c1] = erected;

    let meets = [
        line_intersection(a, a1, b, b1),
        line_intersection(b, b1, c, c1),
        line_intersection(c, c1, a, a1),
    ];
    let (point, residual) = match meets {
        [Some(p), Some(q), Some(r)] => {
            let f = (p + q + r) / 3.0;
            let spread = p.dist(q).max(q.dist(r)).max(r.dist(p));
            let scale = tri.diameter().max(f.dist(tri.centroid()));
            if spread > tol.concurrency * scale {
                return Err(Error::ConcurrencyViolation { residual: spread / scale });
            }
            (Some(f), Some(spread / scale))
        }
        _ => (None, None),
    };

    let Some(f) = point else {
        let mut res = degenerate_minimizer(tri, w)?;
        res.erected = Some(erected);
        res.conditions = Some(conditions);
        res.tilde = tilde;
        return Ok(res);
    };

    let bary = to_barycentric(f, tri).0;
    let min_bary = bary[0].min(bary[1]).min(bary[2]);
    let slack = angle_slack(tri, &tilde).expect("tilde angles exist");
    let all_hold = conditions.iter().all(|&c| c);
    let clearly_fails = slack.iter().any(|&s| s < -tol.eps_angle);
    let margin = tol.residual;
    if (all_hold && min_bary < -margin) || (clearly_fails && min_bary > margin) {
        return Err(Error::InteriorMismatch {
            conditions,
            min_barycentric: min_bary,
        });
    }

    if all_hold && min_bary > 0.0 {
        let orbit = pedal_triangle(f, tri);
        let (status, fallback) = if orbit.is_strictly_inscribed() {
            (OrbitStatus::Interior, None)
        } else {
            let fb = degenerate_minimizer(tri, w)?.fallback;
            (OrbitStatus::PedalOutside, fb)
        };
        return Ok(SnellOrbitResult {
            status,
            point: Some(f),
            weighted_perimeter: weighted_perimeter(&orbit, w),
            orbit: Some(orbit),
            erected: Some(erected),
            conditions: Some(conditions),
            tilde,
            concurrency_residual: residual,
            fallback,
        });
    }

    let mut res = degenerate_minimizer(tri, w)?;
    res.point = Some(f);
    res.erected = Some(erected);
    res.conditions = Some(conditions);
    res.concurrency_residual = residual;
    Ok(res)
}

/// Doubled-altitude candidates plus a brute-force minimum, for weights where
/// no interior Snell orbit exists.
pub fn degenerate_minimizer(tri: &Triangle, w: &Weights) -> Result<SnellOrbitResult> {
    let lam = w.as_array();
    let alts = altitudes(tri);
    let candidates = Side::ALL.map(|v| {
        let i = v.index();
        let alt = alts[i];
        let mut params = [0.0; 3];
        params[i] = alt.param;
        params[(i + 1) % 3] = 1.0;
        params[(i + 2) % 3] = 0.0;
        let orbit = InscribedTriangle::from_params(tri, params);
        AltitudeCandidate {
            vertex: v,
            foot: alt.foot,
            length: alt.length,
            weighted_cost: (lam[(i + 1) % 3] + lam[(i + 2) % 3]) * alt.length,
            admissible: (0.0..=1.0).contains(&alt.param),
            orbit,
        }
    });
    let weighted_choice = (0..3)
        .filter(|&i| candidates[i].admissible)
        .min_by(|&i, &j| candidates[i].weighted_cost.total_cmp(&candidates[j].weighted_cost))
        .expect("the altitude onto the longest side has its foot on that side");
    let shortest_altitude = (0..3)
        .min_by(|&i, &j| candidates[i].length.total_cmp(&candidates[j].length))
        .expect("three candidates");
    let brute_force = minimize_inscribed(tri, w, &MinimizeOptions::default())?;
    let chosen = candidates[weighted_choice];
    Ok(SnellOrbitResult {
        status: OrbitStatus::Degenerate,
        point: None,
        orbit: Some(chosen.orbit),
        weighted_perimeter: chosen.weighted_cost,
        erected: None,
        conditions: None,
        tilde: tilde_triangle(tri, w),
        concurrency_residual: None,
        fallback: Some(DegenerateFallback {
            candidates,
            weighted_choice,
            shortest_altitude,
            brute_force,
        }),
    })
}

/// Division ratios of the cevians through F, measured on the figure and
/// predicted from sides, angles and weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CevianRatios {
    /// `[CA0/BA0, AB0/CB0, BC0/AC0]`, signed.
    pub geometric: [f64; 3],
    pub closed_form: [f64; 3],
}

impl CevianRatios {
    pub fn max_relative_error(&self) -> f64 {
        (0..3)
            .map(|i| ((self.geometric[i] - self.closed_form[i]) / self.closed_form[i]).abs())
            .fold(0.0, f64::max)
    }

    pub fn closed_form_product(&self) -> f64 {
        self.closed_form.iter().product()
    }
}

pub fn cevian_ratios(tri: &Triangle, w: &Weights, tilde: &TildeTriangle) -> Result<CevianRatios> {
    let erected = erect_similar(tri, tilde)?;
    let at = tilde.angles.ok_or(Error::TildeDegenerate)?;
    let ang = tri.angles();
    let s = tri.sides();
    let lam = w.as_array();
    let mut geometric = [0.0; 3];
    let mut closed_form = [0.0; 3];
    for side in Side::ALL {
        let i = side.index();
        let (p, q) = tri.side_endpoints(side);
        let v = tri.vertex(side);
        let foot = line_intersection(v, erected[i], p, q).ok_or(Error::DegenerateLine)?;
        let t = line_param(foot, p, q);
        geometric[i] = (1.0 - t) / t;
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        closed_form[i] = lam[j] * s[j] * s[j] * (ang[k] + at[k]).sin()
            / (lam[k] * s[k] * s[k] * (ang[j] + at[j]).sin());
    }
    Ok(CevianRatios {
        geometric,
        closed_form,
    })
}

/// Residuals `|sin∠FCA / sin∠FBA − κa|` and cyclic, for a candidate point F.
pub fn verify_snell_point(f: Point2, tri: &Triangle, k: &RefractionCoeffs) -> Result<[f64; 3]> {
    for side in Side::ALL {
        let (p, q) = tri.side_endpoints(side);
        let d = (q - p).cross(f - p) / (q - p).norm();
        if d.abs() <= 1e-12 * tri.diameter() {
            return Err(Error::OnSideLine(side));
        }
    }
    let sin_at = |apex: Point2, toward: Point2| {
        let u = f - apex;
        let v = toward - apex;
        u.cross(v).abs() / (u.norm() * v.norm())
    };
    let [a, b, c] = tri.vertices();
    let kap = k.as_array();
    Ok([
        (sin_at(c, a) / sin_at(b, a) - kap[0]).abs(),
        (sin_at(a, b) / sin_at(c, b) - kap[1]).abs(),
        (sin_at(b, c) / sin_at(a, c) - kap[2]).abs(),
    ])
}

/// Outcome of the concurrency test for the side normals at an inscribed triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaReport {
    /// `η_a = sin∠(h_a, A'B') / sin∠(h_a, A'C')` and cyclic.
    pub etas: [f64; 3],
    pub product: f64,
    /// `|η_a η_b η_c − 1| ≤ tol`.
    pub product_test: bool,
    /// Distance from `h_a ∩ h_b` to `h_c`, relative to the diameter.
    pub miss: f64,
    pub direct_test: bool,
}

impl EtaReport {
    pub fn concurrent(&self) -> bool {
        self.product_test && self.direct_test
    }
}

/// Tests whether the normals to the sides at `A', B', C'` meet in one point.
pub fn eta_concurrency_test(it: &InscribedTriangle, tri: &Triangle, tol: &Tolerances) -> EtaReport {
    let pts = it.points;
    let normals = Side::ALL.map(|s| tri.inward_normal(s));
    let sin_between = |n: Point2, v: Point2| n.cross(v).abs() / v.norm();
    let etas = [0, 1, 2].map(|i| {
        let p = pts[i];
        sin_between(normals[i], pts[(i + 1) % 3] - p) / sin_between(normals[i], pts[(i + 2) % 3] - p)
    });
    let product = etas.iter().product::<f64>();
    let diam = tri.diameter();
    let miss = match line_intersection(pts[0], pts[0] + normals[0], pts[1], pts[1] + normals[1]) {
        Some(x) => normals[2].cross(x - pts[2]).abs() / diam,
        None => f64::INFINITY,
    };
    EtaReport {
        etas,
        product,
        product_test: (product - 1.0).abs() <= tol.concurrency,
        miss,
        direct_test: miss <= tol.concurrency,
    }
}
