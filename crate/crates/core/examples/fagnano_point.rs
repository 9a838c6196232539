//! The weighted Fagnano point of a scalene triangle and its pedal orbit.

use snell_fagnano::{snell_fagnano_point, weighted_perimeter, Tolerances, Triangle, Weights};

fn main() -> snell_fagnano::Result<()> {
    let tri = Triangle::from_sides(4.0, 5.0, 6.0)?;
    let tol = Tolerances::default();

    for w in [Weights::uniform(), Weights::new(1.0, 1.1, 0.9)?] {
        let res = snell_fagnano_point(&tri, &w, &tol)?;
        println!("weights {:?}", w.as_array());
        println!("  status     {:?}", res.status);
        if let Some(f) = res.point {
            println!("  F          ({:.12}, {:.12})", f.x, f.y);
        }
        if let Some(orbit) = res.orbit {
            for (name, p) in ["A'", "B'", "C'"].iter().zip(orbit.points) {
                println!("  {name:<10} ({:.12}, {:.12})", p.x, p.y);
            }
            println!("  perimeter  {:.12}", orbit.perimeter());
            println!("  weighted   {:.12}", weighted_perimeter(&orbit, &w));
        }
        println!("  concurrency residual {:.2e}", res.concurrency_residual.unwrap_or(f64::NAN));
    }
    Ok(())
}
