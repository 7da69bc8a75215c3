//! Plain SVG drawings of triangulations.
//!
//! Output depends only on the inputs; numbers are printed with a fixed
//! number of decimals so repeated runs produce identical bytes.

use std::fmt::Write as _;

use crate::geom::{Circle, Point2};
use crate::triangulation::{PointSet, Triangulation};

/// What to draw besides points and edges.
#[derive(Debug, Clone, Default)]
pub struct Figure<'a> {
    pub guides: &'a [Circle],
    /// Drawn as a highlighted polyline.
    pub path: &'a [usize],
    /// Drawn as larger dots.
    pub marked: Option<(usize, usize)>,
    pub caption: Option<String>,
}

const SIZE: f64 = 800.0;

/// Renders `t` over `ps` in a square canvas, `y` pointing up.
pub fn render(ps: &PointSet, t: &Triangulation, fig: &Figure) -> String {
    let mut lo = Point2 { x: f64::INFINITY, y: f64::INFINITY };
    let mut hi = Point2 { x: f64::NEG_INFINITY, y: f64::NEG_INFINITY };
    let mut grow = |p: Point2, r: f64| {
        lo = Point2 { x: lo.x.min(p.x - r), y: lo.y.min(p.y - r) };
        hi = Point2 { x: hi.x.max(p.x + r), y: hi.y.max(p.y + r) };
    };
    for &p in ps.points() {
        grow(p, 0.0);
    }
    for c in fig.guides {
        grow(c.center, c.radius);
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let pad = 0.05 * SIZE;
    let k = (SIZE - 2.0 * pad) / span;
    let map = |p: Point2| ((p.x - lo.x) * k + pad, SIZE - ((p.y - lo.y) * k + pad));

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    )
    .unwrap();
    writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();

    writeln!(out, "<g fill=\"none\" stroke=\"#9ab\" stroke-width=\"0.8\" stroke-dasharray=\"4 3\">").unwrap();
    for c in fig.guides {
        let (x, y) = map(c.center);
        writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\"/>", c.radius * k).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, "<g stroke=\"#444\" stroke-width=\"0.6\">").unwrap();
    for (u, v) in t.edges() {
        let ((x1, y1), (x2, y2)) = (map(ps[u]), map(ps[v]));
        writeln!(out, "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>").unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if fig.path.len() > 1 {
        let pts: Vec<String> = fig
            .path
            .iter()
            .map(|&i| {
                let (x, y) = map(ps[i]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"#d22\" stroke-width=\"2.5\" points=\"{}\"/>",
            pts.join(" ")
        )
        .unwrap();
    }

    let r = if ps.len() > 500 { 1.0 } else { 2.2 };
    writeln!(out, "<g fill=\"black\">").unwrap();
    for &p in ps.points() {
        let (x, y) = map(p);
        writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r}\"/>").unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if let Some((p, q)) = fig.marked {
        writeln!(out, "<g fill=\"#d22\">").unwrap();
        for i in [p, q] {
            let (x, y) = map(ps[i]);
            writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"5\"/>").unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    if let Some(caption) = &fig.caption {
        writeln!(
            out,
            "<text x=\"{pad}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            pad * 0.7,
            escape(caption)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
