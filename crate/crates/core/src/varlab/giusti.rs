//! Layered trace extension: interpolates a family of progressively less
//! mollified copies of the boundary datum at dyadically shrinking depths,
//! realizing the trace with `W^{1,1}` norm close to the datum's `L1` norm.

use crate::error::{Error, Result};
use crate::geometry::{CircleBoundary, Point};

use super::{tv, BoundaryDatum, GridField};

/// Domains with an inner distance and a boundary projection.
#[derive(Clone, Copy, Debug)]
pub enum ExtensionDomain {
    Disc(CircleBoundary),
    UnitSquare,
}

impl ExtensionDomain {
    pub fn depth(&self, p: Point) -> f64 {
        match self {
            ExtensionDomain::Disc(b) => b.inner_distance(p),
            ExtensionDomain::UnitSquare => p.x.min(p.y).min(1.0 - p.x).min(1.0 - p.y),
        }
    }

    pub fn project(&self, p: Point) -> Point {
        match self {
            ExtensionDomain::Disc(b) => b.project(p).unwrap_or(p),
            ExtensionDomain::UnitSquare => {
                // Nearest edge.
                let cands = [
                    (p.x, Point::new(0.0, p.y)),
                    (1.0 - p.x, Point::new(1.0, p.y)),
                    (p.y, Point::new(p.x, 0.0)),
                    (1.0 - p.y, Point::new(p.x, 1.0)),
                ];
                cands
                    .into_iter()
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .unwrap()
                    .1
            }
        }
    }

    /// Width of the band where the projection is trusted.
    fn band(&self) -> f64 {
        match self {
            ExtensionDomain::Disc(b) => b.band,
            ExtensionDomain::UnitSquare => 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GiustiReport {
    /// Measured `W^{1,1}` norm: `L1` of the field plus its isotropic TV.
    pub w11: f64,
    pub grad_l1: f64,
    pub l1: f64,
    pub datum_l1: f64,
    pub layers: usize,
    pub t0: f64,
}

/// Builds the layered interpolant on the template's grid and mask. The
/// template's values are overwritten; its mask/trace structure is kept so the
/// result can be fed to the solver machinery and the coarea check.
///
/// Layer depths halve from `t0 = min(band, eps^2)/2` (clamped to at least 12
/// grid cells so the layers stay resolved); the mollification widths halve
/// from `ramp_start` down to the datum's own ramp. Cells deeper than `t0`
/// are zero; cells shallower than the last depth carry the datum itself, so
/// the trace is exact up to the datum's mollification width.
pub fn giusti_extension(
    domain: &ExtensionDomain,
    template: &GridField,
    datum: &BoundaryDatum,
    epsilon: f64,
    ramp_start: f64,
) -> Result<(GridField, GiustiReport)> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidInput("epsilon must lie in (0, 1/2)".into()));
    }
    let h = template.grid.h;
    let band = domain.band();
    if 12.0 * h > band {
        return Err(Error::ResolutionTooCoarse {
            given: h,
            required: band / 12.0,
        });
    }
    let t0 = (band.min(epsilon * epsilon) / 2.0).max(12.0 * h);

    // Mollification widths, coarse to fine, ending at the datum's own ramp.
    let mut ws: Vec<f64> = Vec::new();
    let target = datum.ramp.max(f64::MIN_POSITIVE);
    let mut w = ramp_start.max(target);
    while w > 1.5 * target {
        ws.push(w);
        w /= 2.0;
    }
    ws.push(datum.ramp);
    // Depths halve; keep every layer at least 3 cells thick.
    let max_layers = ((t0 / (3.0 * h)).log2().floor() as isize).max(0) as usize;
    if max_layers == 0 {
        return Err(Error::ResolutionTooCoarse {
            given: h,
            required: t0 / 6.0,
        });
    }
    if ws.len() > max_layers {
        ws.drain(0..ws.len() - max_layers);
    }
    let layers = ws.len();
    let ts: Vec<f64> = (0..=layers).map(|k| t0 / (1u64 << k) as f64).collect();

    let mut out = template.clone();
    let g = out.grid;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.idx(i, j);
            if !out.mask[c] {
                out.vals[c] = 0.0;
                continue;
            }
            let p = g.center(i, j);
            let d = domain.depth(p);
            out.vals[c] = if d >= ts[0] {
                0.0
            } else {
                let s = domain.project(p);
                if d < ts[layers] {
                    datum.value_at(s)
                } else {
                    // Locate the layer [t_{k+1}, t_k) containing d.
                    let k = ts.partition_point(|&t| t > d) - 1;
                    let (tk, tk1) = (ts[k], ts[k + 1]);
                    let hk = if k == 0 {
                        0.0
                    } else {
                        datum.value_with_ramp(s, ws[k - 1])
                    };
                    let hk1 = datum.value_with_ramp(s, ws[k]);
                    ((tk - d) * hk1 + (d - tk1) * hk) / (tk - tk1)
                }
            };
        }
    }

    let grad_l1 = tv::tv(&out);
    let l1 = out.l1_norm();
    let report = GiustiReport {
        w11: grad_l1 + l1,
        grad_l1,
        l1,
        datum_l1: datum.l1,
        layers,
        t0,
    };
    Ok((out, report))
}
