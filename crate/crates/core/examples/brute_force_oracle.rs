//! Direct numerical minimization of the weighted perimeter over inscribed
//! triangles, compared with the construction.

use snell_fagnano::{minimize_inscribed, snell_fagnano_point, MinimizeOptions, Tolerances, Triangle, Weights};

fn main() -> snell_fagnano::Result<()> {
    let tri = Triangle::from_sides(4.0, 5.0, 6.0)?;
    let w = Weights::new(1.0, 1.1, 0.9)?;
    let res = snell_fagnano_point(&tri, &w, &Tolerances::default())?;
    let bf = minimize_inscribed(&tri, &w, &MinimizeOptions::default())?;

    println!("constructed cost {:.15}", res.weighted_perimeter);
    println!("minimized cost   {:.15}", bf.cost);
    println!("relative gap     {:.2e}", (bf.cost - res.weighted_perimeter) / res.weighted_perimeter);
    let orbit = res.orbit.expect("interior orbit");
    for (p, q) in bf.best.points.iter().zip(orbit.points) {
        println!("vertex distance  {:.2e}", p.dist(q));
    }
    println!("iterations {} converged {}", bf.iterations, bf.converged);
    Ok(())
}
