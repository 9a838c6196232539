//! Derivative-free minimization of the weighted perimeter over inscribed
//! triangles. Independent of the construction, so it serves as its oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::Weights;
use crate::error::{Error, Result};
use crate::geometry::{InscribedTriangle, Triangle};

/// `λA|B'C'| + λB|C'A'| + λC|A'B'|`.
pub fn weighted_perimeter(it: &InscribedTriangle, w: &Weights) -> f64 {
    let ch = it.chords();
    w.lam_a * ch[0] + w.lam_b * ch[1] + w.lam_c * ch[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizeOptions {
    /// Grid resolution per side parameter; `(grid + 1)³` samples.
    pub grid: usize,
    /// Maximum total number of line-search sweeps after the grid search.
    pub refine_iters: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grid: 64,
            refine_iters: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeReport {
    pub best: InscribedTriangle,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `|area(best)| / area(triangle)`; small values mean the minimizer
    /// collapsed onto a doubled segment.
    pub flatness: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section(mut lo: f64, mut hi: f64, width: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Grid search over `[0,1]³` followed by cyclic golden-section line
/// searches. The cost is convex in the side parameters, so every line search
/// is unimodal.
pub fn minimize_inscribed(tri: &Triangle, w: &Weights, opts: &MinimizeOptions) -> Result<MinimizeReport> {
    if opts.grid < 16 {
        return Err(Error::InvalidInput(format!(
            "grid must be at least 16, got {}",
            opts.grid
        )));
    }
    let cost = |t: [f64; 3]| weighted_perimeter(&InscribedTriangle::from_params(tri, t), w);
    let n = opts.grid;
    let h = 1.0 / n as f64;
    let (_, mut t) = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, [0.0; 3]);
            for j in 0..=n {
                for k in 0..=n {
                    let p = [i as f64 * h, j as f64 * h, k as f64 * h];
                    let c = cost(p);
                    if c < best.0 {
                        best = (c, p);
                    }
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, [0.0; 3]),
            |x, y| if y.0 < x.0 { y } else { x },
        );

    // Line searches along the axes, the pairwise diagonals, the net
    // displacement of the previous sweep and the way to the nearest face.
    // The cost has kinks where two feet meet at a vertex, so it is first
    // smoothed with `sqrt(|chord|² + ε²)`
    // and ε is driven to zero.
    let mut dirs: Vec<[f64; 3]> = (0..3)
        .map(|i| {
            let mut d = [0.0; 3];
            d[i] = 1.0;
            d
        })
        .collect();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        for sign in [1.0, -1.0] {
            let mut d = [0.0; 3];
            d[i] = 1.0;
            d[j] = sign;
            dirs.push(d);
        }
    }
    let diam = tri.diameter();
    let mut iterations = 0;
    let mut converged = false;
    for eps in [1e-2, 1e-4, 1e-6, 1e-8, 0.0].map(|e| e * diam) {
        let smooth = |t: [f64; 3]| {
            let ch = InscribedTriangle::from_params(tri, t).chords();
            let lam = w.as_array();
            (0..3).map(|i| lam[i] * ch[i].hypot(eps)).sum::<f64>()
        };
        let mut stage_cost = smooth(t);
        converged = false;
        while iterations < opts.refine_iters {
            iterations += 1;
            let start = t;
            let start_cost = stage_cost;
            for d in &dirs {
                line_search(&smooth, &mut t, &mut stage_cost, *d);
            }
            let d = [t[0] - start[0], t[1] - start[1], t[2] - start[2]];
            if d.iter().any(|&x| x != 0.0) {
                line_search(&smooth, &mut t, &mut stage_cost, d);
            }
            // toward nearby faces and corners of the cube; minima there are
            // kinks that the other directions only zig-zag into
            for r in [1e-3, 1e-2, 0.1, 0.5] {
                let snapped = t.map(|x| if x < r { 0.0 } else if x > 1.0 - r { 1.0 } else { x });
                let d = [snapped[0] - t[0], snapped[1] - t[1], snapped[2] - t[2]];
                if d.iter().any(|&x| x != 0.0) {
                    line_search(&smooth, &mut t, &mut stage_cost, d);
                }
            }
            let step = (0..3).map(|i| (t[i] - start[i]).abs()).fold(0.0, f64::max);
            if step < 1e-12 || stage_cost >= start_cost - 1e-15 * start_cost {
                converged = true;
                break;
            }
        }
    }
    let best_cost = cost(t);

    let best = InscribedTriangle::from_params(tri, t);
    Ok(MinimizeReport {
        flatness: best.area().abs() / tri.area(),
        best,
        cost: best_cost,
        iterations,
        converged,
    })
}

/// Minimizes along `t + s·d` within the unit cube, keeping the result only
/// if it lowers the cost.
fn line_search(cost: &impl Fn([f64; 3]) -> f64, t: &mut [f64; 3], best: &mut f64, d: [f64; 3]) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..3 {
        if d[i] > 0.0 {
            lo = lo.max(-t[i] / d[i]);
            hi = hi.min((1.0 - t[i]) / d[i]);
        } else if d[i] < 0.0 {
            lo = lo.max((1.0 - t[i]) / d[i]);
            hi = hi.min(-t[i] / d[i]);
        }
    }
    if hi <= lo || hi.is_nan() || lo.is_nan() {
        return;
    }
    let scale = d.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let along = |s: f64| [t[0] + s * d[0], t[1] + s * d[1], t[2] + s * d[2]].map(|x| x.clamp(0.0, 1.0));
    let s = golden_section(lo, hi, 1e-13 / scale, |s| cost(along(s)));
    // golden section never lands on the ends, where minima on the cube's
    // boundary sit
    for p in [along(s), along(lo), along(hi)] {
        let c = cost(p);
        if c < *best {
            *best = c;
            *t = p;
        }
    }
}
