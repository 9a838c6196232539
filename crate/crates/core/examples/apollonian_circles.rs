//! Weight circles through the vertices: they share two points, inverse in the
//! circumcircle, exactly when the triangle with sides (λA a, λB b, λC c) exists.

use snell_fagnano::apollonius::{circumcircle, weight_circles, Locus};
use snell_fagnano::{apollonian_common_points, tilde_triangle, Tolerances, Triangle, Weights};

fn main() -> snell_fagnano::Result<()> {
    let tri = Triangle::from_sides(4.0, 5.0, 6.0)?;
    let tol = Tolerances::default();
    let o = circumcircle(&tri);

    for w in [Weights::new(1.0, 1.2, 0.8)?, Weights::new(1.0, 1.0, 5.0)?] {
        let tilde = tilde_triangle(&tri, &w);
        println!("weights {:?}: tilde triangle exists = {}", w.as_array(), tilde.exists);
        for c in weight_circles(&tri, &w)? {
            match c.locus {
                Locus::Circle(ci) => println!(
                    "  circle center ({:.6}, {:.6}) radius {:.6}",
                    ci.center.x, ci.center.y, ci.radius
                ),
                Locus::Bisector { point, .. } => println!("  bisector through ({:.6}, {:.6})", point.x, point.y),
            }
        }
        let pts = apollonian_common_points(&tri, &w, &tol)?;
        for p in &pts {
            println!("  common point ({:.12}, {:.12})", p.x, p.y);
        }
        if let [p, q] = pts[..] {
            let power = p.dist(o.center) * q.dist(o.center);
            println!("  |OP|·|OQ| = {power:.12}, R² = {:.12}", o.radius * o.radius);
        }
    }
    Ok(())
}
