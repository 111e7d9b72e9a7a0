//! Recursive chord subdivision producing the fat Cantor set.
//!
//! One step removes, from each chord of length `d`, the middle segment of
//! length `d^2`; the perpendiculars at the removed segment's endpoints meet
//! the arc at single points, which split the curve into the two child arcs.
//! Chords contract by at least a factor 2/3 per level while the summed chord
//! lengths stay bounded below, which is what makes the limit set fat.

use crate::error::{Error, Result};
use crate::geometry::{Chord, ConcaveArc};
use crate::util::Kahan;

/// Maximum construction depth; beyond this the smallest chords approach the
/// root-finder tolerance and the construction is refused.
pub const MAX_DEPTH: usize = 16;

/// One curve segment and its chord at a given construction level.
#[derive(Clone, Debug)]
pub struct ChordNode {
    pub level: usize,
    /// 0-based index within the level; children of `(level, k)` are
    /// `(level+1, 2k)` and `(level+1, 2k+1)`.
    pub index: usize,
    /// Endpoint abscissas in the root frame.
    pub a: f64,
    pub b: f64,
    pub chord: Chord,
    /// `H^1` of the curve segment over `[a, b]`.
    pub arc_len: f64,
}

/// Per-level aggregates: `mu` = largest chord length, `c` = summed chord
/// lengths.
#[derive(Clone, Copy, Debug)]
pub struct LevelStats {
    pub mu: f64,
    pub c: f64,
}

#[derive(Clone, Debug)]
pub struct CantorTree {
    levels: Vec<Vec<ChordNode>>,
    stats: Vec<LevelStats>,
}

fn make_node(curve: &ConcaveArc, level: usize, index: usize, a: f64, b: f64) -> Result<ChordNode> {
    Ok(ChordNode {
        level,
        index,
        a,
        b,
        chord: curve.chord(a, b)?,
        arc_len: curve.arc_length(a, b)?,
    })
}

/// Splits one node into its two children.
pub fn subdivide(node: &ChordNode, curve: &ConcaveArc) -> Result<(ChordNode, ChordNode)> {
    let d = node.chord.len;
    if !(d < 1.0) {
        return Err(Error::InvalidInput(format!(
            "subdivision needs chord length < 1, got {d}"
        )));
    }
    let ctx = |e: Error| Error::Construction {
        level: node.level,
        index: node.index,
        details: e.to_string(),
    };
    // Middle segment of length d^2, centered in the chord.
    let s1 = 0.5 * (d - d * d);
    let s2 = 0.5 * (d + d * d);
    let p1 = curve
        .perpendicular_intersection(&node.chord, node.chord.at(s1))
        .map_err(ctx)?;
    let p2 = curve
        .perpendicular_intersection(&node.chord, node.chord.at(s2))
        .map_err(ctx)?;
    if !(node.a < p1.x && p1.x < p2.x && p2.x < node.b) {
        return Err(Error::Construction {
            level: node.level,
            index: node.index,
            details: format!(
                "intersection abscissas {} , {} not ordered inside ({}, {})",
                p1.x, p2.x, node.a, node.b
            ),
        });
    }
    let left = make_node(curve, node.level + 1, 2 * node.index, node.a, p1.x).map_err(ctx)?;
    let right = make_node(curve, node.level + 1, 2 * node.index + 1, p2.x, node.b).map_err(ctx)?;
    Ok((left, right))
}

/// Builds the full tree to `depth` levels below the root. Sequential and
/// deterministic: identical inputs give bit-identical trees.
pub fn build(curve: &ConcaveArc, depth: usize) -> Result<CantorTree> {
    if depth > MAX_DEPTH {
        return Err(Error::InvalidInput(format!(
            "depth {depth} exceeds the supported maximum {MAX_DEPTH}"
        )));
    }
    if !curve.hypotheses().main_ok {
        return Err(Error::HypothesesFailed(
            "tree construction needs the chord-replacement condition".into(),
        ));
    }
    let root = make_node(curve, 0, 0, 0.0, curve.eta())?;
    let mut levels = vec![vec![root]];
    for n in 0..depth {
        let mut next = Vec::with_capacity(2 * levels[n].len());
        for node in &levels[n] {
            let (l, r) = subdivide(node, curve)?;
            next.push(l);
            next.push(r);
        }
        levels.push(next);
    }
    let stats = levels
        .iter()
        .map(|nodes| {
            let mut c = Kahan::new();
            let mut mu: f64 = 0.0;
            for node in nodes {
                mu = mu.max(node.chord.len);
                c.add(node.chord.len);
            }
            LevelStats { mu, c: c.total() }
        })
        .collect();
    Ok(CantorTree { levels, stats })
}

impl CantorTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&[ChordNode]> {
        self.levels.get(n).map(|v| v.as_slice()).ok_or(Error::LevelOutOfRange {
            level: n,
            depth: self.depth(),
        })
    }

    pub fn node(&self, level: usize, index: usize) -> Result<&ChordNode> {
        self.level(level)?
            .get(index)
            .ok_or(Error::LevelOutOfRange { level, depth: self.depth() })
    }

    /// `(mu_N, c_N)` for level `N`.
    pub fn chord_stats(&self, n: usize) -> Result<LevelStats> {
        self.level(n)?;
        Ok(self.stats[n])
    }

    /// Summed arc lengths at level `N`, checked against the chord-sum lower
    /// bound, plus the closed-form fatness floor
    /// `c_1 * prod_{k=1}^{N-1} (1 - (2/3)^k)`.
    pub fn measure_bounds(&self, n: usize) -> Result<MeasureBounds> {
        let nodes = self.level(n)?;
        let mut sum = Kahan::new();
        for node in nodes {
            sum.add(node.arc_len);
        }
        let arc_sum = sum.total();
        let c_n = self.stats[n].c;
        if arc_sum + 1e-10 < c_n {
            return Err(Error::VerificationFailed {
                name: "bound.arc-vs-chord-sum".into(),
                details: format!("arc sum {arc_sum} below chord sum {c_n} at level {n}"),
            });
        }
        let lower_bound = if n == 0 {
            self.stats[0].c
        } else {
            let c1 = self.stats[std::cmp::min(1, self.depth())].c;
            let mut prod = 1.0;
            for k in 1..n {
                prod *= 1.0 - (2.0f64 / 3.0).powi(k as i32);
            }
            c1 * prod
        };
        Ok(MeasureBounds { arc_sum, lower_bound })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MeasureBounds {
    pub arc_sum: f64,
    pub lower_bound: f64,
}
