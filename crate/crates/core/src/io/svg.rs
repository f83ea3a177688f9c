//! Deterministic SVG pictures of planar partitions.

use crate::chessboard::ChessboardColouring;
use crate::error::{FaircutError, Result};
use crate::measures::{clip_polygon_all, joint_support_box, polygon_area, BoxMeasure, ConvexRegion, Measure};
use crate::nested::CompositeSplit;
use crate::stairpath::{Segment, StairPartition, StairPath};
use crate::voronoifair::{Cells, FairPartition};
use crate::Side;
use std::fmt::Write;

const WIDTH: f64 = 800.0;
const MEASURE_COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const LABEL_COLOURS: [&str; 6] = ["#fdd49e", "#c6dbef", "#c7e9c0", "#dadaeb", "#fcbba1", "#d9d9d9"];

/// Labelled convex cells, plus a stair path when one is known.
#[derive(Debug, Clone, Default)]
pub struct Drawing {
    pub regions: Vec<(ConvexRegion, String)>,
    pub path: Option<StairPath>,
}

fn side_name(s: Side) -> String {
    match s {
        Side::A => "A".into(),
        Side::B => "B".into(),
    }
}

impl Drawing {
    pub fn empty() -> Self {
        Drawing::default()
    }

    pub fn stair(p: &StairPartition, path: Option<&StairPath>) -> Self {
        let mut regions = Vec::new();
        for s in [Side::A, Side::B] {
            regions.extend(p.regions(s).into_iter().map(|r| (r, side_name(s))));
        }
        Drawing { regions, path: path.cloned() }
    }

    /// Cells with 1-based thief labels.
    pub fn labelled(cells: Vec<(ConvexRegion, usize)>) -> Self {
        Drawing { regions: cells.into_iter().map(|(r, l)| (r, (l + 1).to_string())).collect(), path: None }
    }

    pub fn nested(s: &CompositeSplit) -> Self {
        Drawing::labelled(s.labelled_regions(2))
    }

    pub fn chessboard(c: &ChessboardColouring) -> Self {
        Drawing { regions: c.cells().into_iter().map(|(r, s)| (r, side_name(s))).collect(), path: None }
    }

    pub fn voronoi(cells: &Cells, p: &FairPartition) -> Self {
        let regs = cells.cells(&p.weights);
        Drawing::labelled(
            regs.into_iter().enumerate().filter(|(i, _)| p.weights[*i] > f64::NEG_INFINITY).map(|(i, r)| (r, p.labels[i])).collect(),
        )
    }
}

struct Frame {
    lo: [f64; 2],
    hi: [f64; 2],
    scale: f64,
}

impl Frame {
    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        ((p[0] - self.lo[0]) * self.scale, (self.hi[1] - p[1]) * self.scale)
    }

    fn rect(&self) -> Vec<[f64; 2]> {
        vec![self.lo, [self.hi[0], self.lo[1]], self.hi, [self.lo[0], self.hi[1]]]
    }

    fn clamp_x(&self, x: f64) -> f64 {
        x.clamp(self.lo[0], self.hi[0])
    }

    fn clamp_y(&self, y: f64) -> f64 {
        y.clamp(self.lo[1], self.hi[1])
    }

    fn on_edge(&self, a: [f64; 2], b: [f64; 2]) -> bool {
        let eps = 1e-9 * (self.hi[0] - self.lo[0] + self.hi[1] - self.lo[1]);
        (0..2).any(|k| {
            ((a[k] - self.lo[k]).abs() < eps && (b[k] - self.lo[k]).abs() < eps)
                || ((a[k] - self.hi[k]).abs() < eps && (b[k] - self.hi[k]).abs() < eps)
        })
    }
}

fn polygon(frame: &Frame, r: &ConvexRegion) -> Vec<[f64; 2]> {
    if r.is_trivially_empty() {
        return Vec::new();
    }
    let planes: Vec<(Vec<f64>, f64)> =
        r.halfspaces.iter().filter(|h| !h.is_trivially_full()).map(|h| (h.normal.clone(), h.offset)).collect();
    clip_polygon_all(frame.rect(), &planes)
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders the measures and the drawing; only planar inputs are accepted.
pub fn render_svg(drawing: &Drawing, measures: &[BoxMeasure]) -> Result<String> {
    let dim = measures.first().map(|m| m.dim()).ok_or_else(|| FaircutError::Input("no measures to render".into()))?;
    if dim != 2 {
        return Err(FaircutError::UnsupportedDimension(dim));
    }
    let (lo, hi) = joint_support_box(measures)?;
    let m = [0.1 * (hi[0] - lo[0]), 0.1 * (hi[1] - lo[1])];
    let lo = [lo[0] - m[0], lo[1] - m[1]];
    let hi = [hi[0] + m[0], hi[1] + m[1]];
    let frame = Frame { lo, hi, scale: WIDTH / (hi[0] - lo[0]) };
    let (w, h) = (WIDTH, (hi[1] - lo[1]) * frame.scale);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, fmt(w), fmt(h), fmt(w), fmt(h));
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, fmt(w), fmt(h));

    let polys: Vec<(Vec<[f64; 2]>, &str)> = drawing.regions.iter().map(|(r, l)| (polygon(&frame, r), l.as_str())).collect();
    let mut names: Vec<&str> = polys.iter().map(|p| p.1).collect();
    names.sort();
    names.dedup();
    let _ = writeln!(out, r#"<g id="cells">"#);
    for (p, l) in &polys {
        if p.len() < 3 {
            continue;
        }
        let c = LABEL_COLOURS[names.iter().position(|n| n == l).unwrap_or(0) % LABEL_COLOURS.len()];
        let pts: Vec<String> = p.iter().map(|q| frame.px(*q)).map(|(x, y)| format!("{},{}", fmt(x), fmt(y))).collect();
        let _ = writeln!(out, r#"<polygon points="{}" fill="{c}" fill-opacity="0.5" stroke="none"/>"#, pts.join(" "));
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="measures">"#);
    for (j, mu) in measures.iter().enumerate() {
        let c = MEASURE_COLOURS[j % MEASURE_COLOURS.len()];
        for i in 0..mu.len() {
            let (a, b) = (mu.atom_lo(i), mu.atom_hi(i));
            let (x0, y0) = frame.px([a[0], b[1]]);
            let (x1, y1) = frame.px([b[0], a[1]]);
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{c}" fill-opacity="0.35" stroke="none"/>"#,
                fmt(x0),
                fmt(y0),
                fmt(x1 - x0),
                fmt(y1 - y0)
            );
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="boundaries" stroke="black" stroke-width="2" fill="none">"#);
    match &drawing.path {
        Some(path) => draw_path(&mut out, &frame, path),
        None => {
            let label_at = |p: [f64; 2]| drawing.regions.iter().find(|(r, _)| r.contains(&p)).map(|(_, l)| l.as_str());
            for (p, l) in &polys {
                if p.len() < 3 {
                    continue;
                }
                let orient = if signed_area(p) >= 0.0 { 1.0 } else { -1.0 };
                for e in 0..p.len() {
                    let (a, b) = (p[e], p[(e + 1) % p.len()]);
                    if frame.on_edge(a, b) {
                        continue;
                    }
                    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                    if len == 0.0 {
                        continue;
                    }
                    // outward normal of a counter-clockwise polygon is (dy, -dx)
                    let eps = 1e-7 * (frame.hi[0] - frame.lo[0]);
                    let out_pt = [mid[0] + orient * eps * (b[1] - a[1]) / len, mid[1] - orient * eps * (b[0] - a[0]) / len];
                    let other = label_at(out_pt);
                    if other.map_or(true, |o| *l < o) {
                        let (x0, y0) = frame.px(a);
                        let (x1, y1) = frame.px(b);
                        let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, fmt(x0), fmt(y0), fmt(x1), fmt(y1));
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="labels" font-family="sans-serif" font-size="14" text-anchor="middle">"#);
    for (p, l) in &polys {
        if p.len() < 3 || polygon_area(p) <= 0.0 {
            continue;
        }
        let c = centroid(p);
        let (x, y) = frame.px(c);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{l}</text>"#, fmt(x), fmt(y));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

fn signed_area(p: &[[f64; 2]]) -> f64 {
    (0..p.len()).map(|i| {
        let (a, b) = (p[i], p[(i + 1) % p.len()]);
        a[0] * b[1] - a[1] * b[0]
    }).sum::<f64>() * 0.5
}

fn centroid(p: &[[f64; 2]]) -> [f64; 2] {
    let a = signed_area(p);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..p.len() {
        let (u, v) = (p[i], p[(i + 1) % p.len()]);
        let cr = u[0] * v[1] - v[0] * u[1];
        cx += (u[0] + v[0]) * cr;
        cy += (u[1] + v[1]) * cr;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

fn draw_path(out: &mut String, frame: &Frame, path: &StairPath) {
    let mut wrapped = false;
    for s in &path.segments {
        match *s {
            Segment::Vertical { x, y0, y1 } => {
                let (px0, py0) = frame.px([frame.clamp_x(x), frame.clamp_y(y0)]);
                let (px1, py1) = frame.px([frame.clamp_x(x), frame.clamp_y(y1)]);
                let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, fmt(px0), fmt(py0), fmt(px1), fmt(py1));
                wrapped = false;
            }
            Segment::Horizontal { y, x0, x1, through_infinity } => {
                let dashed = through_infinity || (wrapped && x0.is_infinite());
                let (px0, py0) = frame.px([frame.clamp_x(x0), frame.clamp_y(y)]);
                let (px1, py1) = frame.px([frame.clamp_x(x1), frame.clamp_y(y)]);
                let style = if dashed { r#" stroke-dasharray="8 4""# } else { "" };
                let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"{style}/>"#, fmt(px0), fmt(py0), fmt(px1), fmt(py1));
                if through_infinity {
                    let _ = writeln!(out, r#"<text x="{}" y="{}" stroke="none" fill="black" font-size="16">&#8734;</text>"#, fmt(px1), fmt(py1 - 4.0));
                }
                wrapped = through_infinity;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Halfspace;

    fn square() -> Vec<BoxMeasure> {
        vec![BoxMeasure::uniform(&[0.0, 0.0], &[1.0, 1.0]).unwrap()]
    }

    #[test]
    fn empty_drawing_shows_measures_only() {
        let s = render_svg(&Drawing::empty(), &square()).unwrap();
        assert_eq!(s.matches("<rect").count(), 2);
        assert_eq!(s.matches("<line").count(), 0);
        assert!(s.contains(r#"viewBox="0 0 800.000 800.000""#));
    }

    #[test]
    fn one_vertical_line_is_one_segment() {
        let left = ConvexRegion::full(2).with(Halfspace::below(&[1.0, 0.0], 0.5));
        let right = ConvexRegion::full(2).with(Halfspace::axis_ge(2, 0, 0.5));
        let d = Drawing::labelled(vec![(left, 0), (right, 1)]);
        let s = render_svg(&d, &square()).unwrap();
        assert_eq!(s.matches("<line").count(), 1, "{s}");
        assert!(s.contains(r#"x1="400.000""#));
    }

    #[test]
    fn rejects_other_dimensions() {
        let ms = vec![BoxMeasure::interval(0.0, 1.0).unwrap()];
        assert_eq!(render_svg(&Drawing::empty(), &ms), Err(FaircutError::UnsupportedDimension(1)));
    }
}
