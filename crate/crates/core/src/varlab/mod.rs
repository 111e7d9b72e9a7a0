//! Discrete least-gradient machinery: masked grids, boundary data, total
//! variation, a primal-dual solver with hard trace constraints, the layered
//! trace extension, and the model-problem / coarea check suites.
//!
//! Conventions: cell-centered uniform grids; the trace is imposed on the
//! masked cells adjacent to the complement (the discrete boundary ring), and
//! `tv`/`tv_directional` use forward differences between masked neighbors.

pub mod giusti;
pub mod solver;
pub mod suite;
pub mod tv;

use crate::cantor::CantorTree;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Uniform cell-centered grid over `[x0, x0 + nx h] x [y0, y0 + ny h]`.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
}

impl Grid {
    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.x0 + (i as f64 + 0.5) * self.h,
            self.y0 + (j as f64 + 0.5) * self.h,
        )
    }
}

/// Scalar field on a masked grid with hard trace values on the boundary ring.
#[derive(Clone, Debug)]
pub struct GridField {
    pub grid: Grid,
    /// Domain cells.
    pub mask: Vec<bool>,
    /// Trace cells: masked cells with a 4-neighbor outside the mask.
    pub fixed: Vec<bool>,
    /// Values; trace cells hold the datum, masked-out cells hold 0.
    pub vals: Vec<f64>,
}

impl GridField {
    /// `int |u|` over the mask.
    pub fn l1_norm(&self) -> f64 {
        let h2 = self.grid.h * self.grid.h;
        let mut s = crate::util::Kahan::new();
        for (idx, &m) in self.mask.iter().enumerate() {
            if m {
                s.add(self.vals[idx].abs());
            }
        }
        h2 * s.total()
    }

    /// Marks as fixed every masked cell with an unmasked 4-neighbor (or on
    /// the grid border).
    pub fn fix_boundary_ring(&mut self) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        for j in 0..ny {
            for i in 0..nx {
                let c = self.grid.idx(i, j);
                if !self.mask[c] {
                    continue;
                }
                let edge = i == 0
                    || j == 0
                    || i == nx - 1
                    || j == ny - 1
                    || !self.mask[c - 1]
                    || !self.mask[c + 1]
                    || !self.mask[c - nx]
                    || !self.mask[c + nx];
                if edge {
                    self.fixed[c] = true;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Boundary data
// ---------------------------------------------------------------------------

/// What the trace prescribes, and where.
#[derive(Clone, Debug)]
pub enum DatumKind {
    Zero,
    /// Indicator of `[a, b]` on the bottom edge of the unit square.
    BottomInterval { a: f64, b: f64 },
    /// Indicator of the boundary arc `{x < x0}` of the unit circle
    /// (endpoints `(x0, +-y0)`).
    DiscArcLeft { x0: f64 },
    /// Indicator of the union of level-`depth` curve segments, by abscissa
    /// intervals in the root frame.
    CantorArcs { intervals: Vec<(f64, f64)> },
}

/// A (mollified) indicator datum with its exact `L1` norm.
#[derive(Clone, Debug)]
pub struct BoundaryDatum {
    pub kind: DatumKind,
    /// Full width of the linear ramp at each jump (0 = sharp indicator).
    pub ramp: f64,
    /// `L1` norm of the un-mollified indicator along the boundary; the
    /// symmetric ramp preserves it.
    pub l1: f64,
}

/// Symmetric linear ramp: 0 below `-ramp/2`, 1 above `+ramp/2` of the signed
/// distance into the set.
fn ramp_profile(signed_dist: f64, ramp: f64) -> f64 {
    if ramp <= 0.0 {
        return if signed_dist >= 0.0 { 1.0 } else { 0.0 };
    }
    ((signed_dist + 0.5 * ramp) / ramp).clamp(0.0, 1.0)
}

impl BoundaryDatum {
    pub fn zero() -> Self {
        BoundaryDatum {
            kind: DatumKind::Zero,
            ramp: 0.0,
            l1: 0.0,
        }
    }

    pub fn bottom_interval(a: f64, b: f64, ramp: f64) -> Result<Self> {
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidInput("need 0 <= a < b <= 1".into()));
        }
        Ok(BoundaryDatum {
            kind: DatumKind::BottomInterval { a, b },
            ramp,
            l1: b - a,
        })
    }

    pub fn disc_arc_left(x0: f64, ramp: f64) -> Result<Self> {
        if !(-1.0 < x0 && x0 < 1.0) {
            return Err(Error::InvalidInput("need -1 < x0 < 1".into()));
        }
        // Endpoint angle of (x0, y0); the arc runs through angle pi.
        let theta0 = (x0).acos();
        Ok(BoundaryDatum {
            kind: DatumKind::DiscArcLeft { x0 },
            ramp,
            l1: 2.0 * (std::f64::consts::PI - theta0),
        })
    }

    /// Indicator of the level-`n` Cantor curves. The ramp is clamped to a
    /// third of the smallest gap so neighboring plateaus stay separated.
    pub fn cantor_arcs(tree: &CantorTree, n: usize, ramp: f64) -> Result<Self> {
        let nodes = tree.level(n)?;
        let intervals: Vec<(f64, f64)> = nodes.iter().map(|nd| (nd.a, nd.b)).collect();
        let min_gap = intervals
            .windows(2)
            .map(|w| w[1].0 - w[0].1)
            .fold(f64::INFINITY, f64::min);
        let l1 = tree.measure_bounds(n)?.arc_sum;
        Ok(BoundaryDatum {
            kind: DatumKind::CantorArcs { intervals },
            ramp: ramp.min(min_gap / 3.0),
            l1,
        })
    }

    /// Datum value at a boundary point (coordinate conventions per kind:
    /// square edge points, unit-circle points, or root-frame curve points).
    pub fn value_at(&self, p: Point) -> f64 {
        self.value_with_ramp(p, self.ramp)
    }

    /// Same, with an overridden ramp width (used by the layer family of the
    /// trace extension).
    pub fn value_with_ramp(&self, p: Point, ramp: f64) -> f64 {
        match &self.kind {
            DatumKind::Zero => 0.0,
            DatumKind::BottomInterval { a, b } => {
                if p.y > 1e-9 {
                    return 0.0;
                }
                let d = (p.x - a).min(b - p.x);
                ramp_profile(d, ramp)
            }
            DatumKind::DiscArcLeft { x0 } => {
                let theta0 = x0.acos();
                let theta = p.y.atan2(p.x).abs();
                // Arc-length distance into the set on the unit circle.
                ramp_profile(theta - theta0, ramp)
            }
            DatumKind::CantorArcs { intervals } => {
                let x = p.x;
                let i = intervals.partition_point(|&(_, b)| b < x);
                let mut d = f64::NEG_INFINITY;
                for &(a, b) in intervals
                    .iter()
                    .skip(i.saturating_sub(1))
                    .take(2)
                {
                    d = d.max((x - a).min(b - x));
                }
                ramp_profile(d, ramp)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario grids
// ---------------------------------------------------------------------------

/// Unit square `[0,1]^2`, `n x n` cells, full mask, datum on the bottom edge
/// of the boundary ring (other ring cells get 0).
pub fn square_scenario(n: usize, datum: &BoundaryDatum) -> GridField {
    let grid = Grid {
        nx: n,
        ny: n,
        x0: 0.0,
        y0: 0.0,
        h: 1.0 / n as f64,
    };
    let cells = grid.cells();
    let mut f = GridField {
        grid,
        mask: vec![true; cells],
        fixed: vec![false; cells],
        vals: vec![0.0; cells],
    };
    f.fix_boundary_ring();
    for j in 0..n {
        for i in 0..n {
            let c = grid.idx(i, j);
            if f.fixed[c] && j == 0 {
                let p = grid.center(i, j);
                f.vals[c] = datum.value_at(Point::new(p.x, 0.0));
            }
        }
    }
    f
}

/// Unit disc on `[-1,1]^2`, `n x n` cells; trace cells take the datum at the
/// radial projection of their centers.
pub fn disc_scenario(n: usize, datum: &BoundaryDatum) -> GridField {
    let grid = Grid {
        nx: n,
        ny: n,
        x0: -1.0,
        y0: -1.0,
        h: 2.0 / n as f64,
    };
    let cells = grid.cells();
    let mut mask = vec![false; cells];
    for j in 0..n {
        for i in 0..n {
            let p = grid.center(i, j);
            if p.x * p.x + p.y * p.y < 1.0 {
                mask[grid.idx(i, j)] = true;
            }
        }
    }
    let mut f = GridField {
        grid,
        mask,
        fixed: vec![false; cells],
        vals: vec![0.0; cells],
    };
    f.fix_boundary_ring();
    for j in 0..n {
        for i in 0..n {
            let c = grid.idx(i, j);
            if f.fixed[c] {
                let p = grid.center(i, j);
                let r = p.x.hypot(p.y);
                f.vals[c] = datum.value_at(Point::new(p.x / r, p.y / r));
            }
        }
    }
    f
}

/// Local band near the concave arc, in root-frame coordinates: the grid
/// covers `[x0, x1] x [y0, y1]`, masked to the disc interior. Used for the
/// Cantor-datum scenarios, whose minimizers live under the arc; the box cuts
/// far from the datum's support carry zero trace.
pub fn band_scenario(
    boundary: &crate::geometry::CircleBoundary,
    bbox: (f64, f64, f64, f64),
    h: f64,
    datum: &BoundaryDatum,
) -> GridField {
    let (x0, x1, y0, y1) = bbox;
    let nx = ((x1 - x0) / h).ceil() as usize;
    let ny = ((y1 - y0) / h).ceil() as usize;
    let grid = Grid { nx, ny, x0, y0, h };
    let cells = grid.cells();
    let mut mask = vec![false; cells];
    for j in 0..ny {
        for i in 0..nx {
            if boundary.inner_distance(grid.center(i, j)) > 0.0 {
                mask[grid.idx(i, j)] = true;
            }
        }
    }
    let mut f = GridField {
        grid,
        mask,
        fixed: vec![false; cells],
        vals: vec![0.0; cells],
    };
    f.fix_boundary_ring();
    for j in 0..ny {
        for i in 0..nx {
            let c = grid.idx(i, j);
            if f.fixed[c] {
                let p = grid.center(i, j);
                // Only cells next to the true domain boundary carry the
                // datum; box cuts through the interior keep zero trace.
                if boundary.inner_distance(p) < 2.0 * h {
                    if let Ok(q) = boundary.project(p) {
                        f.vals[c] = datum.value_at(q);
                    }
                }
            }
        }
    }
    f
}
