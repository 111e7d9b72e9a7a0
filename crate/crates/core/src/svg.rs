//! Headless SVG figures: the construction picture (arc, chords, removed
//! middles, triangles) and filled-contour renderings of grid fields.
//! Output is deterministic: fixed ordering and fixed-precision coordinates.

use std::fmt::Write as _;

use crate::cantor::CantorTree;
use crate::error::Result;
use crate::geometry::{ConcaveArc, Point};
use crate::regions::triangles_of_level;
use crate::varlab::GridField;

const W: f64 = 900.0;
const MARGIN: f64 = 40.0;

struct Mapper {
    sx: f64,
    sy: f64,
    x0: f64,
    y1: f64,
    height: f64,
}

impl Mapper {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let sx = (W - 2.0 * MARGIN) / (x1 - x0);
        let height = (y1 - y0) * sx + 2.0 * MARGIN;
        Mapper {
            sx,
            sy: sx,
            x0,
            y1,
            height,
        }
    }

    // y axis flipped: the curve bulges upward in the figure.
    fn map(&self, p: Point) -> (f64, f64) {
        (
            MARGIN + (p.x - self.x0) * self.sx,
            MARGIN + (self.y1 - p.y) * self.sy,
        )
    }
}

fn path_from(points: &[Point], m: &Mapper) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = m.map(*p);
        let _ = write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
    }
    d.trim_end().to_string()
}

/// The construction figure: curve arc, per-level chords, the removed middle
/// segments (dashed), and the right triangles of the deepest drawn level.
pub fn construction_figure(curve: &ConcaveArc, tree: &CantorTree, draw_depth: usize) -> Result<String> {
    let depth = draw_depth.min(tree.depth());
    let eta = curve.eta();
    // Vertical extent: the arc height plus room for triangles below the
    // deepest chords (they stay above the root chord).
    let top = curve.f(eta / 2.0).max(curve.f(0.0)).max(curve.f(eta));
    let m = Mapper::new(-0.05 * eta, 1.05 * eta, -0.1 * top - 1e-12, 1.25 * top + 1e-12);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0}" height="{:.0}" viewBox="0 0 {W:.0} {:.0}">"#,
        m.height.ceil(),
        m.height.ceil()
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Arc.
    let samples = 600;
    let arc: Vec<Point> = (0..=samples)
        .map(|i| curve.point_at(eta * i as f64 / samples as f64))
        .collect();
    let _ = writeln!(
        s,
        r#"<path d="{}" fill="none" stroke="black" stroke-width="1.6"/>"#,
        path_from(&arc, &m)
    );

    // Chords per level, lighter with depth; removed middles dashed.
    for n in 0..=depth {
        let gray = 40 + (150 * n) / (depth.max(1));
        for node in tree.level(n)? {
            let c = &node.chord;
            let _ = writeln!(
                s,
                r#"<path d="{}" fill="none" stroke="rgb({gray},{gray},{gray})" stroke-width="0.9"/>"#,
                path_from(&[c.start, c.end], &m)
            );
            if n < depth {
                let d = c.len;
                let m1 = c.at((d - d * d) / 2.0);
                let m2 = c.at((d + d * d) / 2.0);
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="none" stroke="crimson" stroke-width="1.2" stroke-dasharray="3 2"/>"#,
                    path_from(&[m1, m2], &m)
                );
            }
        }
    }

    // Triangles of the deepest drawn level.
    if depth >= 1 {
        for t in triangles_of_level(tree, depth)? {
            let [a, b, c] = t.vertices();
            let (ax, ay) = m.map(a);
            let (bx, by) = m.map(b);
            let (cx, cy) = m.map(c);
            let _ = writeln!(
                s,
                r#"<polygon points="{ax:.3},{ay:.3} {bx:.3},{by:.3} {cx:.3},{cy:.3}" fill="rgba(70,110,180,0.35)" stroke="rgb(40,70,140)" stroke-width="0.7"/>"#
            );
        }
    }

    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn band_color(t: f64, bands: usize) -> String {
    // Quantized blue-to-orange map; t in [0, 1].
    let q = ((t * bands as f64).floor().min(bands as f64 - 1.0)).max(0.0) / (bands as f64 - 1.0).max(1.0);
    let r = (40.0 + 215.0 * q).round() as u8;
    let g = (60.0 + 110.0 * q).round() as u8;
    let b = (200.0 - 160.0 * q).round() as u8;
    format!("rgb({r},{g},{b})")
}

/// Filled-contour rendering: values are quantized into `bands` color levels
/// and equal-colored runs along rows are merged into single rectangles.
pub fn field_figure(field: &GridField, bands: usize) -> String {
    let g = &field.grid;
    let bands = bands.max(2);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in 0..g.cells() {
        if field.mask[c] {
            lo = lo.min(field.vals[c]);
            hi = hi.max(field.vals[c]);
        }
    }
    if !lo.is_finite() || hi - lo < 1e-15 {
        lo = 0.0;
        hi = 1.0;
    }
    let scale = (W - 2.0 * MARGIN) / (g.nx as f64);
    let height = g.ny as f64 * scale + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W:.0}" height="{height:.0}" viewBox="0 0 {W:.0} {height:.0}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for j in 0..g.ny {
        // SVG rows top-down; grid rows bottom-up.
        let y = MARGIN + (g.ny - 1 - j) as f64 * scale;
        let mut i = 0usize;
        while i < g.nx {
            let c = g.idx(i, j);
            if !field.mask[c] {
                i += 1;
                continue;
            }
            let level = (((field.vals[c] - lo) / (hi - lo)) * bands as f64).floor() as i64;
            let mut run = 1usize;
            while i + run < g.nx {
                let cc = g.idx(i + run, j);
                if !field.mask[cc] {
                    break;
                }
                let l2 = (((field.vals[cc] - lo) / (hi - lo)) * bands as f64).floor() as i64;
                if l2 != level {
                    break;
                }
                run += 1;
            }
            let x = MARGIN + i as f64 * scale;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                run as f64 * scale,
                scale,
                band_color((field.vals[c] - lo) / (hi - lo), bands)
            );
            i += run;
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}
