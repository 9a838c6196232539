mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snell_fagnano::apollonius::apollonian_common_points;
use snell_fagnano::billiards::{is_periodic, simulate, BilliardState};
use snell_fagnano::construction::{
    coeffs_from_weights, erect_similar, snell_fagnano_point, verify_snell_point, OrbitStatus,
};
use snell_fagnano::coords::{isogonal_conjugate_point, to_barycentric, tripolar_of_point};
use snell_fagnano::geometry::Side;
use snell_fagnano::optimize::{minimize_inscribed, weighted_perimeter, MinimizeOptions};
use snell_fagnano::{tilde_triangle, Tolerances};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interior_point_is_inside_with_pedal_orbit(seed in any::<u64>()) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-3);
        let res = snell_fagnano_point(&tri, &w, &Tolerances::default()).unwrap();
        prop_assert_eq!(res.status, OrbitStatus::Interior);
        let f = res.point.unwrap();
        prop_assert!(to_barycentric(f, &tri).0.iter().all(|&x| x > 0.0));
        let orbit = res.orbit.unwrap();
        prop_assert!(orbit.is_strictly_inscribed());
        prop_assert!((weighted_perimeter(&orbit, &w) - res.weighted_perimeter).abs() < 1e-12 * res.weighted_perimeter);
    }

    #[test]
    fn cevians_concurrent_and_erection_proportional(seed in any::<u64>()) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-3);
        let res = snell_fagnano_point(&tri, &w, &Tolerances::default()).unwrap();
        prop_assert!(res.concurrency_residual.unwrap() < 1e-9);
        let e = erect_similar(&tri, &tilde_triangle(&tri, &w)).unwrap();
        let [_, b, _] = tri.vertices();
        let c = tri.sides()[2];
        let lhs = b.dist(e[0]) * w.lam_a;
        prop_assert!((lhs - c * w.lam_c).abs() < 1e-9 * lhs);
    }

    #[test]
    fn snell_residuals_vanish(seed in any::<u64>()) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-3);
        let f = snell_fagnano_point(&tri, &w, &Tolerances::default()).unwrap().point.unwrap();
        let r = verify_snell_point(f, &tri, &coeffs_from_weights(&w)).unwrap();
        prop_assert!(r.iter().all(|&x| x < 1e-9), "{:?}", r);
    }

    #[test]
    fn conjugate_has_weight_tripolar_and_is_an_apollonian_point(seed in any::<u64>()) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-3);
        let tol = Tolerances::default();
        let f = snell_fagnano_point(&tri, &w, &tol).unwrap().point.unwrap();
        let g = isogonal_conjugate_point(f, &tri).unwrap();
        let tp = tripolar_of_point(g, &tri).0;
        let l = w.as_array();
        for i in 1..3 {
            let (x, y) = (tp[i] / l[i], tp[0] / l[0]);
            prop_assert!((x - y).abs() < 1e-9 * y);
        }
        let common = apollonian_common_points(&tri, &w, &tol).unwrap();
        let d = common.iter().map(|p| p.dist(g)).fold(f64::INFINITY, f64::min);
        prop_assert!(d < 1e-8 * tri.diameter().max(g.dist(tri.centroid())));
        // at most one common point has an interior conjugate
        let interior = common
            .iter()
            .filter(|&&p| {
                isogonal_conjugate_point(p, &tri)
                    .map(|q| to_barycentric(q, &tri).0.iter().all(|&x| x > 0.0))
                    .unwrap_or(false)
            })
            .count();
        prop_assert!(interior <= 1);
    }

    #[test]
    fn weight_scaling_changes_nothing(seed in any::<u64>(), mu in 0.01f64..100.0) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-3);
        let tol = Tolerances::default();
        let r1 = snell_fagnano_point(&tri, &w, &tol).unwrap();
        let r2 = snell_fagnano_point(&tri, &w.scaled(mu).unwrap(), &tol).unwrap();
        let d = tri.diameter();
        prop_assert!(r1.point.unwrap().dist(r2.point.unwrap()) < 1e-10 * d);
        for (p, q) in r1.orbit.unwrap().points.iter().zip(r2.orbit.unwrap().points) {
            prop_assert!(p.dist(q) < 1e-10 * d);
        }
    }

    #[test]
    fn orbit_is_three_periodic_both_ways(seed in any::<u64>()) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-3);
        let tol = Tolerances::default();
        let orbit = snell_fagnano_point(&tri, &w, &tol).unwrap().orbit.unwrap();
        let k = coeffs_from_weights(&w);
        let [pa, pb, pc] = orbit.points;
        let ccw = BilliardState::toward(&tri, Side::A, orbit.params[0], pb).unwrap();
        let states = simulate(&ccw, &tri, &k, 3, &tol).unwrap();
        prop_assert!(is_periodic(&ccw, &tri, &k, 3, 1e-8).unwrap());
        prop_assert!(states[1].position(&tri).dist(pb) < 1e-8 * tri.diameter());
        prop_assert!(states[2].position(&tri).dist(pc) < 1e-8 * tri.diameter());

        // clockwise with reciprocal coefficients visits the same points in reverse
        let cw = BilliardState::toward(&tri, Side::A, orbit.params[0], pc).unwrap();
        let back = simulate(&cw, &tri, &k.reciprocal(), 3, &tol).unwrap();
        prop_assert!(back[1].position(&tri).dist(pc) < 1e-8 * tri.diameter());
        prop_assert!(back[2].position(&tri).dist(pb) < 1e-8 * tri.diameter());
        prop_assert!(back[3].position(&tri).dist(pa) < 1e-8 * tri.diameter());
        prop_assert!((back[3].direction - cw.direction).norm() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn brute_force_agrees_with_construction(seed in any::<u64>()) {
        let (tri, w) = common::admissible(&mut rng(seed), 1e-2);
        let res = snell_fagnano_point(&tri, &w, &Tolerances::default()).unwrap();
        let bf = minimize_inscribed(&tri, &w, &MinimizeOptions::default()).unwrap();
        prop_assert!((bf.cost - res.weighted_perimeter).abs() <= 1e-6 * res.weighted_perimeter,
            "{} vs {}", bf.cost, res.weighted_perimeter);
        prop_assert!(bf.cost >= res.weighted_perimeter * (1.0 - 1e-12));
        let d = tri.diameter();
        for (p, q) in bf.best.points.iter().zip(res.orbit.unwrap().points) {
            prop_assert!(p.dist(q) < 1e-4 * d);
        }
    }

    #[test]
    fn brute_force_scales_with_weights(seed in any::<u64>(), mu in 0.1f64..10.0) {
        let mut r = rng(seed);
        let tri = common::triangle(&mut r, 15.0);
        let w = common::weights(&mut r, 3.0);
        let opts = MinimizeOptions::default();
        let a = minimize_inscribed(&tri, &w, &opts).unwrap();
        let b = minimize_inscribed(&tri, &w.scaled(mu).unwrap(), &opts).unwrap();
        prop_assert!((b.cost - mu * a.cost).abs() < 1e-9 * b.cost);
        prop_assert!(a.cost > 0.0);
        for (p, q) in a.best.points.iter().zip(b.best.points) {
            prop_assert!(p.dist(q) < 1e-4 * tri.diameter());
        }
    }

    #[test]
    fn degenerate_inputs_flatten_the_minimizer(seed in any::<u64>()) {
        let (tri, w) = common::inadmissible(&mut rng(seed), 1e-2);
        let res = snell_fagnano_point(&tri, &w, &Tolerances::default()).unwrap();
        prop_assert!(res.status != OrbitStatus::Interior);
        let fb = res.fallback.unwrap();
        prop_assert!(fb.brute_force.flatness < 1e-3, "flatness {}", fb.brute_force.flatness);
        prop_assert!(fb.brute_force.cost <= res.weighted_perimeter * (1.0 + 1e-9));
    }
}
