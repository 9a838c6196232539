//! Obtuse triangles and lopsided weights: no interior orbit exists and the
//! minimizer collapses onto a doubled altitude.

use snell_fagnano::{snell_fagnano_point, Tolerances, Triangle, Weights};

fn main() -> snell_fagnano::Result<()> {
    let tol = Tolerances::default();
    let cases = [
        (Triangle::from_sides(7.0, 4.0, 4.0)?, Weights::uniform()),
        (Triangle::from_sides(4.0, 5.0, 6.0)?, Weights::new(1.0, 1.0, 3.0)?),
    ];
    for (tri, w) in cases {
        let res = snell_fagnano_point(&tri, &w, &tol)?;
        println!("sides {:?} weights {:?}: {:?}", tri.sides(), w.as_array(), res.status);
        let fb = res.fallback.expect("degenerate fallback");
        for c in &fb.candidates {
            println!(
                "  altitude from {:?}: length {:.9} weighted cost {:.9} admissible {}",
                c.vertex, c.length, c.weighted_cost, c.admissible
            );
        }
        println!(
            "  weighted choice {:?}, shortest altitude {:?}",
            fb.candidates[fb.weighted_choice].vertex, fb.candidates[fb.shortest_altitude].vertex
        );
        println!("  brute force cost {:.9} flatness {:.2e}", fb.brute_force.cost, fb.brute_force.flatness);
    }
    Ok(())
}
