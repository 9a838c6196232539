//! Writes the construction figure to an SVG file (default `figure.svg`).

use snell_fagnano::svg::{render_svg, RenderOptions};
use snell_fagnano::{apollonian_common_points, snell_fagnano_point, Tolerances, Triangle, Weights};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "figure.svg".into());
    let tri = Triangle::from_sides(4.0, 5.0, 6.0)?;
    let w = Weights::new(1.0, 1.1, 0.9)?;
    let tol = Tolerances::default();
    let res = snell_fagnano_point(&tri, &w, &tol)?;
    let opts = RenderOptions { apollonian: true, common_points: apollonian_common_points(&tri, &w, &tol)? };
    let svg = render_svg(&tri, &w, &res, &opts)?;
    std::fs::write(&out, svg)?;
    println!("wrote {out}");
    Ok(())
}
