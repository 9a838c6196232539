//! The pedal orbit of the weighted Fagnano point is a 3-periodic Snell
//! billiard trajectory; a generic start is not.

use snell_fagnano::billiards::is_periodic;
use snell_fagnano::{
    coeffs_from_weights, simulate, snell_fagnano_point, BilliardState, Side, Tolerances, Triangle, Weights,
};

fn main() -> snell_fagnano::Result<()> {
    let tri = Triangle::from_sides(4.0, 5.0, 6.0)?;
    let w = Weights::new(1.0, 1.1, 0.9)?;
    let tol = Tolerances::default();
    let k = coeffs_from_weights(&w);
    println!("kappa {:?} (product {:.3})", k.as_array(), k.product());

    let orbit = snell_fagnano_point(&tri, &w, &tol)?.orbit.expect("interior orbit");
    let start = BilliardState::toward(&tri, Side::A, orbit.params[0], orbit.points[1])?;
    for (i, s) in simulate(&start, &tri, &k, 6, &tol)?.iter().enumerate() {
        let p = s.position(&tri);
        println!("{i}: side {:?} t = {:.12} at ({:.9}, {:.9})", s.side, s.param, p.x, p.y);
    }
    println!("orbit start periodic: {}", is_periodic(&start, &tri, &k, 3, 1e-8)?);

    let other = BilliardState::toward(&tri, Side::A, 0.3, tri.point_on_side(Side::B, 0.6))?;
    println!("generic start periodic: {}", is_periodic(&other, &tri, &k, 3, 1e-8)?);
    Ok(())
}
