//! Barycentric, trilinear and tripolar coordinates, isogonal conjugation and
//! the tripolar-to-Cartesian conversion with its zero, one or two answers.

use snell_fagnano::coords::{
    isogonal_conjugate_point, to_barycentric, to_trilinear, tripolar_of_point, tripolar_to_points, Tripolar,
};
use snell_fagnano::{Point2, Tolerances, Triangle};

fn main() -> snell_fagnano::Result<()> {
    let tri = Triangle::from_sides(4.0, 5.0, 6.0)?;
    let tol = Tolerances::default();
    let p = Point2::new(2.0, 1.0);

    let bc = to_barycentric(p, &tri).normalized()?;
    println!("P            ({}, {})", p.x, p.y);
    println!("barycentric  {:.12?}", bc.0);
    println!("trilinear    {:.12?}", to_trilinear(p, &tri).0);
    let tp = tripolar_of_point(p, &tri);
    println!("tripolar     {:.12?}", tp.0);
    let q = isogonal_conjugate_point(p, &tri)?;
    println!("conjugate    ({:.12}, {:.12})", q.x, q.y);

    // the distances determine P up to the ratio only: rescaling them still
    // recovers P, possibly with a second point inverse to it in the circumcircle
    let ratio = Tripolar(tp.0.map(|d| d / tp.0[0]));
    for cand in tripolar_to_points(&ratio, &tri, &tol)? {
        println!("candidate    ({:.12}, {:.12}) scale {:.12}", cand.point.x, cand.point.y, cand.scale);
    }

    match tripolar_to_points(&Tripolar([1.0, 1.0, 10.0]), &tri, &tol) {
        Ok(c) if c.is_empty() => println!("(1 : 1 : 10) is not realizable"),
        Ok(c) => println!("(1 : 1 : 10) -> {} points", c.len()),
        Err(e) => println!("(1 : 1 : 10): {e}"),
    }
    Ok(())
}
