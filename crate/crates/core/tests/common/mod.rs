#![allow(dead_code)]

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use snell_fagnano::billiards::RiverInstance;
use snell_fagnano::construction::{interior_conditions, Weights};
use snell_fagnano::geometry::{Point2, Triangle};
use snell_fagnano::{tilde_triangle, Tolerances};

/// Triangle with angles in `(min_deg, 180 - 2 min_deg)`, random scale,
/// rotation and translation.
pub fn triangle(rng: &mut ChaCha8Rng, min_deg: f64) -> Triangle {
    let lo = min_deg.to_radians();
    loop {
        let a = rng.gen_range(lo..PI - 2.0 * lo);
        let b = rng.gen_range(lo..PI - 2.0 * lo);
        if PI - a - b > lo {
            return place(rng, [a, b, PI - a - b]);
        }
    }
}

/// Acute triangle with every angle in `(lo_deg, hi_deg)`.
pub fn triangle_in_band(rng: &mut ChaCha8Rng, lo_deg: f64, hi_deg: f64) -> Triangle {
    let (lo, hi) = (lo_deg.to_radians(), hi_deg.to_radians());
    loop {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        let c = PI - a - b;
        if c > lo && c < hi {
            return place(rng, [a, b, c]);
        }
    }
}

/// Places a triangle with the given angles at a random position.
pub fn place(rng: &mut ChaCha8Rng, angles: [f64; 3]) -> Triangle {
    let scale = 10f64.powf(rng.gen_range(-1.0..1.0));
    let rot = rng.gen_range(0.0..2.0 * PI);
    let shift = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let [a, b, c] = angles.map(|t| scale * t.sin());
    let base = Triangle::from_sides(a, b, c).unwrap();
    let [p, q, r] = base.vertices().map(|v| v.rotated(rot) + shift);
    Triangle::new(p, q, r).unwrap()
}

pub fn weights(rng: &mut ChaCha8Rng, spread: f64) -> Weights {
    let mut l = || spread.powf(rng.gen_range(-1.0..1.0));
    Weights::new(l(), l(), l()).unwrap()
}

/// Smallest of `π − (angle + tilde angle)`, or `None` when the tilde triangle is missing.
pub fn interior_slack(tri: &Triangle, w: &Weights) -> Option<f64> {
    let t = tilde_triangle(tri, w);
    let at = t.angles?;
    let a = tri.angles();
    Some((0..3).map(|i| PI - a[i] - at[i]).fold(f64::INFINITY, f64::min))
}

/// An acute triangle with weights whose weighted Fagnano point is interior,
/// with angle slack above `margin`.
pub fn admissible(rng: &mut ChaCha8Rng, margin: f64) -> (Triangle, Weights) {
    loop {
        let tri = triangle_in_band(rng, 10.0, 89.0);
        let w = weights(rng, 2.0);
        if interior_slack(&tri, &w).is_some_and(|s| s > margin) {
            let t = tilde_triangle(&tri, &w);
            debug_assert!(interior_conditions(&tri, &t, &Tolerances::default())
                .unwrap()
                .iter()
                .all(|&c| c));
            return (tri, w);
        }
    }
}

/// An acute triangle with weights that admit no interior Snell orbit: either
/// the tilde triangle is missing or some angle condition fails by more than
/// `margin`.
pub fn inadmissible(rng: &mut ChaCha8Rng, margin: f64) -> (Triangle, Weights) {
    loop {
        let tri = triangle_in_band(rng, 10.0, 89.0);
        let w = weights(rng, 4.0);
        match interior_slack(&tri, &w) {
            None => return (tri, w),
            Some(s) if s < -margin => return (tri, w),
            _ => {}
        }
    }
}

/// Two villages on the same side of a random bank line, random weights.
pub fn river(r: &mut ChaCha8Rng) -> RiverInstance {
    let l0 = Point2::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
    let dir = Point2::new(1.0, 0.0).rotated(r.gen_range(0.0..2.0 * PI));
    let n = dir.perp();
    let a = l0 + dir * r.gen_range(-3.0..3.0) + n * r.gen_range(0.1..3.0);
    let b = l0 + dir * r.gen_range(-3.0..3.0) + n * r.gen_range(0.1..3.0);
    RiverInstance {
        a,
        b,
        line: [l0, l0 + dir * r.gen_range(0.5..2.0)],
        lam1: 3f64.powf(r.gen_range(-1.0..1.0)),
        lam2: 3f64.powf(r.gen_range(-1.0..1.0)),
    }
}
