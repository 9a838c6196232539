//! Two villages on one side of a river: the cheapest landing point with
//! per-leg costs λ1, λ2 obeys Snell's law.

use snell_fagnano::{solve_river, Point2, RiverInstance};

fn main() -> snell_fagnano::Result<()> {
    let inst = RiverInstance {
        a: Point2::new(-2.0, 1.0),
        b: Point2::new(3.0, 2.5),
        line: [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)],
        lam1: 1.0,
        lam2: 1.6,
    };
    let s = solve_river(&inst)?;
    println!("landing point ({:.12}, {:.12})", s.x.x, s.x.y);
    println!("cost          {:.12}", s.cost);
    println!("Snell residual {:.2e}", s.snell_residual);
    for dx in [-0.1, 0.1] {
        let other = Point2::new(s.x.x + dx, 0.0);
        println!("cost at x{dx:+}   {:.12}", inst.cost_at(other));
    }
    Ok(())
}
