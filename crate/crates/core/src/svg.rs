//! Deterministic SVG figures of the construction.

use std::fmt::Write;

use crate::apollonius::{weight_circles, Locus};
use crate::construction::{SnellOrbitResult, Weights};
use crate::error::Result;
use crate::geometry::{Point2, Triangle};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Draw the three weight circles.
    pub apollonian: bool,
    /// Common points of the weight circles to mark.
    pub common_points: Vec<Point2>,
}

/// Maps model coordinates onto the canvas, y up, with a 10% margin.
struct View {
    scale: f64,
    min: Point2,
    offset: Point2,
}

impl View {
    fn fit(points: &[Point2]) -> Self {
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = Point2::new((hi.x - lo.x).max(1e-300), (hi.y - lo.y).max(1e-300));
        let scale = (0.8 * WIDTH / span.x).min(0.8 * HEIGHT / span.y);
        let offset = Point2::new(
            0.5 * (WIDTH - scale * span.x),
            0.5 * (HEIGHT - scale * span.y),
        );
        View { scale, min: lo, offset }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        let x = self.offset.x + self.scale * (p.x - self.min.x);
        let y = HEIGHT - (self.offset.y + self.scale * (p.y - self.min.y));
        (x, y)
    }

    fn pts(&self, ps: &[Point2]) -> String {
        ps.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{} {}", num(x), num(y))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Fixed three-decimal formatting; `-0.000` is printed as `0.000`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Triangle, erected triangles, dashed cevians, F, orbit and optionally the
/// weight circles, on an 800×600 canvas.
pub fn render_svg(tri: &Triangle, w: &Weights, res: &SnellOrbitResult, opts: &RenderOptions) -> Result<String> {
    let [a, b, c] = tri.vertices();
    let mut fit = vec![a, b, c];
    if let Some(e) = res.erected {
        fit.extend(e);
    }
    if let Some(f) = res.point {
        fit.push(f);
    }
    fit.extend(opts.common_points.iter().copied());
    let view = View::fit(&fit);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        WIDTH, HEIGHT, WIDTH, HEIGHT
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if opts.apollonian {
        let _ = writeln!(s, r##"<g id="apollonian" fill="none" stroke="#7a7a7a" stroke-width="1">"##);
        for circle in weight_circles(tri, w)? {
            match circle.locus {
                Locus::Circle(ci) => {
                    let (x, y) = view.map(ci.center);
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                        num(x),
                        num(y),
                        num(ci.radius * view.scale)
                    );
                }
                Locus::Bisector { point, direction } => {
                    let reach = 10.0 * tri.diameter().max(point.dist(tri.centroid()));
                    let (p, q) = (point - direction * reach, point + direction * reach);
                    let ((x1, y1), (x2, y2)) = (view.map(p), view.map(q));
                    let _ = writeln!(
                        s,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(x1),
                        num(y1),
                        num(x2),
                        num(y2)
                    );
                }
            }
        }
        for p in &opts.common_points {
            let (x, y) = view.map(*p);
            let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="4" fill="#7a7a7a"/>"##, num(x), num(y));
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r#"<g id="triangle" fill="none" stroke="black" stroke-width="2">"#);
    let _ = writeln!(s, r#"<polygon points="{}"/>"#, view.pts(&[a, b, c]));
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="labels" font-family="serif" font-size="18" fill="black">"#);
    let centroid = tri.centroid();
    for (name, v) in [("A", a), ("B", b), ("C", c)] {
        let (x, y) = view.map(v);
        let (cx, cy) = view.map(centroid);
        let (dx, dy) = (x - cx, y - cy);
        let n = dx.hypot(dy).max(1e-9);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(x + 16.0 * dx / n),
            num(y + 16.0 * dy / n + 6.0),
            name
        );
    }
    let _ = writeln!(s, "</g>");

    if let Some([a1, b1, c1]) = res.erected {
        let _ = writeln!(s, r##"<g id="erected" fill="#dde6f3" fill-opacity="0.6" stroke="#3b5b8c" stroke-width="1">"##);
        for poly in [[b, a1, c], [c, b1, a], [a, c1, b]] {
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, view.pts(&poly));
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r##"<g id="cevians" stroke="#3b5b8c" stroke-width="1" stroke-dasharray="6 4">"##
        );
        for (v, e) in [(a, a1), (b, b1), (c, c1)] {
            let ((x1, y1), (x2, y2)) = (view.map(v), view.map(e));
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                num(x1),
                num(y1),
                num(x2),
                num(y2)
            );
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(orbit) = res.orbit {
        let _ = writeln!(s, r##"<g id="orbit" fill="none" stroke="#b22222" stroke-width="2">"##);
        let _ = writeln!(s, r#"<polygon points="{}"/>"#, view.pts(&orbit.points));
        let _ = writeln!(s, "</g>");
    }

    if let Some(f) = res.point {
        let (x, y) = view.map(f);
        let _ = writeln!(s, r##"<g id="point" fill="#b22222">"##);
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="5"/>"#, num(x), num(y));
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, "</svg>");
    Ok(s)
}
