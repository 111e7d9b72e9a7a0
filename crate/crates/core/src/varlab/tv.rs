//! Discrete total variation on masked grids: forward differences between
//! masked neighbors, isotropic or per-axis.

use crate::util::Kahan;

use super::GridField;

/// Isotropic TV: `sum h * sqrt(dx^2 + dy^2)` over masked cells, differences
/// skipped where the forward neighbor leaves the mask.
pub fn tv(field: &GridField) -> f64 {
    let g = &field.grid;
    let mut s = Kahan::new();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.idx(i, j);
            if !field.mask[c] {
                continue;
            }
            let dx = if i + 1 < g.nx && field.mask[c + 1] {
                field.vals[c + 1] - field.vals[c]
            } else {
                0.0
            };
            let dy = if j + 1 < g.ny && field.mask[c + g.nx] {
                field.vals[c + g.nx] - field.vals[c]
            } else {
                0.0
            };
            s.add(dx.hypot(dy));
        }
    }
    g.h * s.total()
}

/// Per-axis TV: `sum h * |d_axis u|`; `axis` is 1 (x) or 2 (y).
pub fn tv_directional(field: &GridField, axis: u8) -> f64 {
    let g = &field.grid;
    let mut s = Kahan::new();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.idx(i, j);
            if !field.mask[c] {
                continue;
            }
            let d = match axis {
                1 if i + 1 < g.nx && field.mask[c + 1] => field.vals[c + 1] - field.vals[c],
                2 if j + 1 < g.ny && field.mask[c + g.nx] => field.vals[c + g.nx] - field.vals[c],
                _ => 0.0,
            };
            s.add(d.abs());
        }
    }
    g.h * s.total()
}
