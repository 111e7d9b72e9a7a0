//! Right triangles under the chords, the nested regions `B_N`, the cascade
//! of orthogonal projections onto chords, the induced unit vector fields,
//! and component sampling for the Lipschitz probe.
//!
//! All points here are expressed in the curve's root frame (the chord `[AB]`
//! is the segment `[0, eta] x {0}` and the arc lies above it).
//!
//! `B_N` is the union of three kinds of pieces:
//! * caps `D_N^+` between the level-`N` curve segments and their chords,
//! * level-`N` triangles `T_N`,
//! * `D_N^-`, the points that project — vertically onto the root chord, then
//!   through the triangle hypotenuses level by level — onto a level-`N` chord.

pub mod exact;
pub mod rad;

use crate::cantor::CantorTree;
use crate::error::{Error, Result};
use crate::geometry::{Chord, CircleBoundary, ConcaveArc, Point, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One level-`N` right triangle: its leg is the level-`N` chord, its
/// hypotenuse sits on the parent chord.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub level: usize,
    pub index: usize,
    /// Right-angle vertex: the inner endpoint of the leg chord.
    pub alpha: Point,
    /// Vertex shared by the leg chord and the parent chord (a curve point).
    pub shared: Point,
    /// Other hypotenuse endpoint, on the parent chord.
    pub hyp_end: Point,
    /// The level-`N` chord (the triangle's leg).
    pub leg: Chord,
    /// Hypotenuse interval in parent-chord coordinates, `hyp_s0 < hyp_s1`.
    pub hyp_s0: f64,
    pub hyp_s1: f64,
    /// Hypotenuse length.
    pub hyp_len: f64,
}

impl Triangle {
    pub fn vertices(&self) -> [Point; 3] {
        [self.shared, self.alpha, self.hyp_end]
    }

    /// Closed (`strict = false`) or open (`strict = true`) membership.
    pub fn contains(&self, p: Point, strict: bool) -> bool {
        let [a, b, c] = self.vertices();
        let d1 = (p - a).cross(b - a);
        let d2 = (p - b).cross(c - b);
        let d3 = (p - c).cross(a - c);
        if strict {
            (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0)
        } else {
            (d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0) || (d1 <= 0.0 && d2 <= 0.0 && d3 <= 0.0)
        }
    }

    fn bbox(&self) -> (f64, f64, f64, f64) {
        let [a, b, c] = self.vertices();
        (
            a.x.min(b.x).min(c.x),
            a.x.max(b.x).max(c.x),
            a.y.min(b.y).min(c.y),
            a.y.max(b.y).max(c.y),
        )
    }
}

/// Builds the level-`n` triangles (`n >= 1`) from the tree chords via the
/// explicit slope formulas in the parent-chord frame:
/// left child `x4 = (1 + a^2) x1`, right child `x5 = (1 + a^2) x2 - a^2 x3`,
/// where `a` is the child-chord slope over the parent chord.
pub fn triangles_of_level(tree: &CantorTree, n: usize) -> Result<Vec<Triangle>> {
    if n == 0 {
        return Err(Error::InvalidInput("triangles start at level 1".into()));
    }
    let nodes = tree.level(n)?;
    let mut out = Vec::with_capacity(nodes.len());
    for node in nodes {
        let parent = tree.node(n - 1, node.index / 2)?;
        let pc = &parent.chord;
        let u = pc.dir();
        let nrm = pc.normal();
        let left = node.index % 2 == 0;
        // Child chord endpoints in the parent-chord frame. The outer endpoint
        // coincides with a parent-chord endpoint; the inner one is the
        // right-angle vertex.
        let (shared, alpha_pt) = if left {
            (pc.start, node.chord.end)
        } else {
            (pc.end, node.chord.start)
        };
        let rel = alpha_pt - pc.start;
        let (xi, yi) = (rel.dot(u), rel.dot(nrm));
        let x3 = pc.len;
        let (s_end, s_shared) = if left {
            let a = yi / xi;
            ((1.0 + a * a) * xi, 0.0)
        } else {
            let a = yi / (xi - x3);
            ((1.0 + a * a) * xi - a * a * x3, x3)
        };
        let hyp_end = pc.at(s_end);
        let (hyp_s0, hyp_s1) = if left { (0.0, s_end) } else { (s_end, x3) };
        let hyp_len = hyp_s1 - hyp_s0;
        if !(hyp_len > 0.0 && hyp_len < 0.5 * pc.len) {
            return Err(Error::VerificationFailed {
                name: "bound.triangle-separation".into(),
                details: format!(
                    "hypotenuse {hyp_len} vs half parent chord {} at level {n} index {}",
                    0.5 * pc.len,
                    node.index
                ),
            });
        }
        let tri = Triangle {
            level: n,
            index: node.index,
            alpha: alpha_pt,
            shared,
            hyp_end,
            leg: node.chord,
            hyp_s0,
            hyp_s1,
            hyp_len,
        };
        // Right angle at alpha, built into the formulas; verify anyway.
        let l1 = tri.shared - tri.alpha;
        let l2 = tri.hyp_end - tri.alpha;
        let cosang = l1.dot(l2) / (l1.norm() * l2.norm());
        // The perpendicular foot carries the root-finder's abscissa
        // tolerance (1e-13), which tilts the leg by up to ~1e-13 / |leg|
        // radians; the admissible cosine deviation scales accordingly.
        let tol = 1e-9f64.max(1e-12 / l1.norm().min(l2.norm()));
        if cosang.abs() > tol {
            return Err(Error::VerificationFailed {
                name: "bound.right-angle".into(),
                details: format!("cos angle {cosang} at level {n} index {}", node.index),
            });
        }
        let _ = s_shared;
        out.push(tri);
    }
    Ok(out)
}

/// Region membership tag for `B_N`; ties on region boundaries resolve in the
/// order cap < triangle < strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionTag {
    /// Inside the level-`N` cap over node `index`.
    Cap { index: usize },
    /// Inside the level-`N` triangle `index`.
    Tri { index: usize },
    /// Inside the strip stack `D_N^-`.
    Strip,
    Outside,
}

/// The full decomposition to the tree's depth.
pub struct Regions {
    pub curve: ConcaveArc,
    pub boundary: CircleBoundary,
    pub tree: CantorTree,
    tris: Vec<Vec<Triangle>>, // tris[n-1] holds level n
}

impl Regions {
    pub fn new(curve: ConcaveArc, boundary: CircleBoundary, tree: CantorTree) -> Result<Self> {
        let mut tris = Vec::with_capacity(tree.depth());
        for n in 1..=tree.depth() {
            tris.push(triangles_of_level(&tree, n)?);
        }
        Ok(Regions {
            curve,
            boundary,
            tree,
            tris,
        })
    }

    /// The default scenario at the given tree depth.
    pub fn default_scenario(depth: usize) -> Result<Self> {
        let (curve, boundary) = ConcaveArc::circle_default();
        let tree = crate::cantor::build(&curve, depth)?;
        Regions::new(curve, boundary, tree)
    }

    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn triangles(&self, n: usize) -> Result<&[Triangle]> {
        if n == 0 || n > self.tris.len() {
            return Err(Error::LevelOutOfRange {
                level: n,
                depth: self.tris.len(),
            });
        }
        Ok(&self.tris[n - 1])
    }

    /// Chord-line height of the level-`N` node cap at abscissa `x`.
    fn chord_line_y(chord: &Chord, x: f64) -> f64 {
        let t = (x - chord.start.x) / (chord.end.x - chord.start.x);
        chord.start.y + t * (chord.end.y - chord.start.y)
    }

    /// Level-`N` cap containing `p` (closed), if any.
    fn cap_at(&self, p: Point, n: usize) -> Option<usize> {
        let nodes = self.tree.level(n).ok()?;
        // Nodes are sorted by abscissa interval; locate by binary search.
        let i = nodes.partition_point(|nd| nd.b < p.x);
        let node = nodes.get(i)?;
        if p.x < node.a || p.x > node.b {
            return None;
        }
        let lo = Self::chord_line_y(&node.chord, p.x);
        let hi = self.curve.f(p.x);
        (p.y >= lo && p.y <= hi).then_some(node.index)
    }

    /// Level-`n` triangle containing `p`, if any. Triangles are stored in
    /// abscissa order with nearly disjoint x-extents; a binary search plus a
    /// short neighborhood scan suffices.
    fn triangle_at_level(&self, p: Point, n: usize, strict: bool) -> Option<&Triangle> {
        let tris = self.tris.get(n.checked_sub(1)?)?;
        let i = tris.partition_point(|t| t.bbox().1 < p.x);
        for t in tris.iter().skip(i.saturating_sub(1)).take(3) {
            let (x0, x1, y0, y1) = t.bbox();
            if p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1 && t.contains(p, strict) {
                return Some(t);
            }
        }
        None
    }

    /// The unique triangle (over all levels up to `max_level`) containing `p`.
    fn triangle_containing(&self, p: Point, max_level: usize, strict: bool) -> Option<&Triangle> {
        for n in 1..=max_level.min(self.tris.len()) {
            if let Some(t) = self.triangle_at_level(p, n, strict) {
                return Some(t);
            }
        }
        None
    }

    /// Whether `p` is in the strip below the root chord (closed at the top).
    fn in_root_strip(&self, p: Point, strict: bool) -> bool {
        let inside = if strict {
            p.x > 0.0 && p.x < self.curve.eta() && p.y < 0.0
        } else {
            p.x >= 0.0 && p.x <= self.curve.eta() && p.y <= 0.0
        };
        inside && self.boundary.inner_distance(p) > 0.0
    }

    /// Starting chord position for the projection cascade: either the
    /// vertical foot on the root chord (strip points) or the orthogonal
    /// projection onto the leg chord of the unique enclosing triangle.
    fn cascade_start(&self, p: Point, max_level: usize) -> Option<(Point, usize, usize)> {
        if self.in_root_strip(p, false) {
            return Some((Point::new(p.x, 0.0), 0, 0));
        }
        let t = self.triangle_containing(p, max_level, false)?;
        let q = t.leg.at(t.leg.coord_of(p));
        Some((q, t.level, t.index))
    }

    /// Projects a point on chord `(level, index)` down the hypotenuse cascade
    /// to a level-`target` chord. Returns the landing point and chord index.
    fn cascade_from(
        &self,
        mut q: Point,
        mut level: usize,
        mut index: usize,
        target: usize,
    ) -> Option<(Point, usize)> {
        while level < target {
            let chord = &self.tree.node(level, index).ok()?.chord;
            let s = chord.coord_of(q);
            let mut advanced = false;
            for child in [2 * index, 2 * index + 1] {
                let t = &self.tris[level][child];
                if s >= t.hyp_s0 && s <= t.hyp_s1 {
                    q = t.leg.at(t.leg.coord_of(q));
                    level += 1;
                    index = child;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return None;
            }
        }
        Some((q, index))
    }

    /// Membership tag of `p` in `B_N`.
    pub fn classify_point(&self, p: Point, n: usize) -> Result<RegionTag> {
        if n > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: n,
                depth: self.depth(),
            });
        }
        if let Some(index) = self.cap_at(p, n) {
            return Ok(RegionTag::Cap { index });
        }
        if n >= 1 {
            if let Some(t) = self.triangle_at_level(p, n, false) {
                return Ok(RegionTag::Tri { index: t.index });
            }
        }
        if n == 0 {
            if self.in_root_strip(p, false) {
                return Ok(RegionTag::Strip);
            }
        } else if let Some((q, lvl, idx)) = self.cascade_start(p, n - 1) {
            if self.cascade_from(q, lvl, idx, n).is_some() {
                return Ok(RegionTag::Strip);
            }
        }
        Ok(RegionTag::Outside)
    }

    /// `Psi_N`: projection of `p in B_N` onto the level-`N` curve, i.e. the
    /// chord cascade followed by the boundary projection.
    pub fn psi(&self, p: Point, n: usize) -> Result<Point> {
        match self.classify_point(p, n)? {
            RegionTag::Cap { .. } => self.boundary.project(p),
            RegionTag::Tri { index } => {
                let t = &self.tris[n - 1][index];
                let q = t.leg.at(t.leg.coord_of(p));
                self.boundary.project(q)
            }
            RegionTag::Strip => {
                let (q, lvl, idx) = self
                    .cascade_start(p, n.saturating_sub(1))
                    .ok_or(Error::OutsideRegion { level: n })?;
                let (q, _) = self
                    .cascade_from(q, lvl, idx, n)
                    .ok_or(Error::OutsideRegion { level: n })?;
                self.boundary.project(q)
            }
            RegionTag::Outside => Err(Error::OutsideRegion { level: n }),
        }
    }

    /// Arc-length coordinate `H^1(arc A..Psi_N(p))` along the boundary arc.
    pub fn pi_arc_coordinate(&self, p: Point, n: usize) -> Result<f64> {
        let q = self.psi(p, n)?;
        let x = q.x.clamp(0.0, self.curve.eta());
        self.curve.arc_length(0.0, x)
    }

    /// `V_N(p)`: chord normal of the deepest (unique) enclosing open
    /// triangle with level `<= N`; otherwise the outward boundary normal on
    /// the open root cap, or `e2` on the open strip. Region boundaries are a
    /// null set and are reported as undefined.
    pub fn v_field(&self, p: Point, n: usize) -> Result<Vector> {
        for m in (1..=n.min(self.tris.len())).rev() {
            if let Some(t) = self.triangle_at_level(p, m, true) {
                return Ok(t.leg.normal());
            }
        }
        let eta = self.curve.eta();
        if p.x > 0.0 && p.x < eta && p.y > 0.0 && p.y < self.curve.f(p.x) {
            return self.boundary.outward_normal(p);
        }
        if self.in_root_strip(p, true) {
            return Ok(Vector::new(0.0, 1.0));
        }
        // Distinguish "on a region boundary" from "outside B_0 entirely".
        let eps = 1e-12;
        let near = self.classify_point(p, 0)? != RegionTag::Outside
            || (p.x > -eps && p.x < eta + eps && p.y < self.curve.f(p.x.clamp(0.0, eta)) + eps);
        if near {
            Err(Error::UndefinedOnNullSet)
        } else {
            Err(Error::OutsideRegion { level: n })
        }
    }

    /// Whether `V_N(p)` stabilizes: at most one value change as `N` runs to
    /// `n_max` (a point is captured by at most one triangle, ever).
    pub fn v_limit_consistency(&self, p: Point, n_max: usize) -> Result<bool> {
        let mut vals = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            vals.push(self.v_field(p, n)?);
        }
        let changes = vals
            .windows(2)
            .filter(|w| {
                let d = w[1] - w[0];
                d.norm() > 1e-15
            })
            .count();
        Ok(changes <= 1)
    }

    /// Chord coordinates on the root chord whose vertical lines cascade into
    /// the level-`n` component `k`: the hypotenuse interval pulled back level
    /// by level through the (affine, invertible) hypotenuse-to-leg
    /// projections.
    pub fn column_footprint(&self, n: usize, k: usize) -> Result<(f64, f64)> {
        if n == 0 {
            return Ok((0.0, self.curve.eta()));
        }
        self.tree.node(n, k)?;
        let chord = &self.tree.node(n, k)?.chord;
        let mut lo = 0.0_f64;
        let mut hi = chord.len;
        let mut idx = k;
        for m in (1..=n).rev() {
            let t = &self.tris[m - 1][idx];
            let parent = &self.tree.node(m - 1, idx / 2)?.chord;
            // Chord coordinates (on the leg) of the projected hypotenuse ends.
            let c0 = t.leg.coord_of(parent.at(t.hyp_s0));
            let c1 = t.leg.coord_of(parent.at(t.hyp_s1));
            // Affine map s_parent -> s_leg over the hypotenuse; invert it.
            let slope = (c1 - c0) / (t.hyp_s1 - t.hyp_s0);
            let inv = |c: f64| t.hyp_s0 + (c - c0) / slope;
            let (a, b) = (inv(lo.max(c0.min(c1))), inv(hi.min(c0.max(c1))));
            lo = a.min(b);
            hi = a.max(b);
            idx /= 2;
        }
        // Root chord coordinates equal abscissas.
        Ok((lo, hi))
    }

    /// Lipschitz constant recipe for `Pi_{k,N}`: with
    /// `C = |f''| (2|f'| + |f''| eta)` and measured `mu_N`,
    /// `a_N = mu_N (1 + C mu_N)`, `b_N` the disc-projection factor
    /// `max d/(R-d)` over cap sagitta heights `d`, and
    /// `1 + c_N = (1 + max(a_N(1+C a_N), b_N)) (1 + C max(...))`.
    pub fn lipschitz_constant(&self, n: usize) -> Result<f64> {
        let stats = self.tree.chord_stats(n)?;
        let cc = self.curve.sup_fpp()
            * (2.0 * self.curve.sup_fp() + self.curve.sup_fpp() * self.curve.eta());
        let a = stats.mu * (1.0 + cc * stats.mu);
        let mut b: f64 = 0.0;
        for node in self.tree.level(n)? {
            let w = node.b - node.a;
            let d = w * w * self.curve.sup_fpp() / 8.0;
            b = b.max(d / (self.boundary.radius - d));
        }
        let t = (a * (1.0 + cc * a)).max(b);
        Ok((1.0 + t) * (1.0 + cc * t) - 1.0)
    }

    /// Samples a point in component `k` of `B_N` (cap, triangle, or strip
    /// column over the component's root-chord footprint).
    fn sample_component_point(&self, n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Point> {
        match rng.gen_range(0..3u8) {
            0 => {
                // Cap: between chord line and curve over the node interval.
                let node = self.tree.node(n, k)?;
                let x = rng.gen_range(node.a..node.b);
                let lo = Self::chord_line_y(&node.chord, x);
                let hi = self.curve.f(x);
                let y = if hi > lo { rng.gen_range(lo..hi) } else { lo };
                Ok(Point::new(x, y))
            }
            1 if n >= 1 => {
                let t = &self.tris[n - 1][k];
                let [a, b, c] = t.vertices();
                let (mut r1, mut r2) = (rng.gen::<f64>(), rng.gen::<f64>());
                if r1 + r2 > 1.0 {
                    r1 = 1.0 - r1;
                    r2 = 1.0 - r2;
                }
                Ok(a + (b - a).scale(r1) + (c - a).scale(r2))
            }
            _ => {
                // Strip column below the root chord.
                let (lo, hi) = self.column_footprint(n, k)?;
                let m = 0.01 * (hi - lo);
                let s = rng.gen_range(lo + m..hi - m);
                let depth = rng.gen_range(1e-4..0.05);
                Ok(Point::new(s, -depth))
            }
        }
    }

    /// Samples `pairs` point pairs inside single components of `B_N` and
    /// measures the worst ratio `|Pi(x) - Pi(y)| / |x - y|`, reported next to
    /// the Lipschitz constant `1 + c_N` from the documented recipe.
    pub fn lipschitz_probe(&self, n: usize, pairs: usize, seed: u64) -> Result<ProbeResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let levels = self.tree.level(n)?.len();
        let mut max_ratio: f64 = 0.0;
        for _ in 0..pairs {
            let k = rng.gen_range(0..levels);
            let p = self.sample_component_point(n, k, &mut rng)?;
            let q = self.sample_component_point(n, k, &mut rng)?;
            let dist = p.dist(q);
            if dist < 1e-12 {
                continue;
            }
            let vp = self.pi_arc_coordinate(p, n)?;
            let vq = self.pi_arc_coordinate(q, n)?;
            max_ratio = max_ratio.max((vp - vq).abs() / dist);
        }
        Ok(ProbeResult {
            max_ratio,
            c_n: self.lipschitz_constant(n)?,
            pairs,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeResult {
    pub max_ratio: f64,
    /// `c_N` from the recipe; the probe should satisfy
    /// `max_ratio <= 1 + c_N`.
    pub c_n: f64,
    pub pairs: usize,
}
