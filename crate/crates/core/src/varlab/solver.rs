//! Primal-dual (Chambolle-Pock) minimization of discrete TV with hard trace
//! equality on the boundary ring and a box constraint spanning the datum
//! range. Truncation to the box never increases TV, so the box leaves the
//! minimum unchanged while giving a computable dual bound for the gap.

use crate::error::Result;

use super::{tv, GridField};

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Relative primal-dual gap target: stop when
    /// `gap < tol * (1 + |tv|)` (physical units).
    pub tol: f64,
    /// Gap evaluation period, iterations.
    pub check_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iter: 200_000,
            tol: 1e-6,
            check_every: 250,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveReport {
    pub tv: f64,
    pub l1_norm: f64,
    pub iterations: usize,
    pub primal_dual_gap: f64,
    pub converged: bool,
}

/// Minimizes TV over the field's free cells (trace cells stay fixed).
/// Deterministic for a given config. Returns the minimizer and the report;
/// non-convergence is flagged, never fatal.
pub fn least_gradient_solve(field: &GridField, config: &SolverConfig) -> Result<(GridField, SolveReport)> {
    let mut out = field.clone();
    let g = out.grid;
    let (nx, ny) = (g.nx, g.ny);
    let cells = g.cells();

    // Box from the trace range.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in 0..cells {
        if out.fixed[c] && out.mask[c] {
            lo = lo.min(out.vals[c]);
            hi = hi.max(out.vals[c]);
        }
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }

    let mut u: Vec<f64> = out.vals.clone();
    for c in 0..cells {
        if out.mask[c] && !out.fixed[c] {
            u[c] = lo;
        }
    }
    let mut ubar = u.clone();
    let mut p1 = vec![0.0f64; cells];
    let mut p2 = vec![0.0f64; cells];

    // tau sigma ||grad||^2 < 1 with ||grad||^2 <= 8 in grid units.
    let step = 1.0 / 8.0f64.sqrt();
    let (tau, sigma) = (step, step);

    let has_dual_x = |c: usize, i: usize| i + 1 < nx && out.mask[c] && out.mask[c + 1];
    let has_dual_y = |c: usize, j: usize| j + 1 < ny && out.mask[c] && out.mask[c + nx];

    let mut iterations = 0usize;
    let mut gap = f64::INFINITY;
    let mut converged = false;

    while iterations < config.max_iter {
        let batch = config.check_every.min(config.max_iter - iterations);
        for _ in 0..batch {
            // Dual ascent + pointwise projection onto the unit disc.
            for j in 0..ny {
                for i in 0..nx {
                    let c = g.idx(i, j);
                    if !out.mask[c] {
                        continue;
                    }
                    let mut q1 = p1[c];
                    let mut q2 = p2[c];
                    if has_dual_x(c, i) {
                        q1 += sigma * (ubar[c + 1] - ubar[c]);
                    }
                    if has_dual_y(c, j) {
                        q2 += sigma * (ubar[c + nx] - ubar[c]);
                    }
                    let n = q1.hypot(q2);
                    if n > 1.0 {
                        q1 /= n;
                        q2 /= n;
                    }
                    p1[c] = q1;
                    p2[c] = q2;
                }
            }
            // Primal descent: u + tau div p, clamped; trace cells pinned.
            for j in 0..ny {
                for i in 0..nx {
                    let c = g.idx(i, j);
                    if !out.mask[c] || out.fixed[c] {
                        ubar[c] = u[c];
                        continue;
                    }
                    let mut div = 0.0;
                    if has_dual_x(c, i) {
                        div += p1[c];
                    }
                    if i > 0 && has_dual_x(c - 1, i - 1) {
                        div -= p1[c - 1];
                    }
                    if has_dual_y(c, j) {
                        div += p2[c];
                    }
                    if j > 0 && has_dual_y(c - nx, j - 1) {
                        div -= p2[c - nx];
                    }
                    let un = (u[c] + tau * div).clamp(lo, hi);
                    ubar[c] = 2.0 * un - u[c];
                    u[c] = un;
                }
            }
        }
        iterations += batch;

        // Primal-dual gap in physical units.
        out.vals = u.clone();
        let primal = tv::tv(&out);
        let dual = g.h * dual_value(&out, &p1, &p2, lo, hi);
        gap = primal - dual;
        if gap < config.tol * (1.0 + primal.abs()) {
            converged = true;
            break;
        }
    }

    out.vals = u;
    let tv_val = tv::tv(&out);
    let report = SolveReport {
        tv: tv_val,
        l1_norm: out.l1_norm(),
        iterations,
        primal_dual_gap: gap.max(0.0),
        converged,
    };
    Ok((out, report))
}

/// Dual objective (grid units) of a feasible `p`:
/// `-(sum_fixed g div p + sum_free max(lo div p, hi div p))`.
fn dual_value(field: &GridField, p1: &[f64], p2: &[f64], lo: f64, hi: f64) -> f64 {
    let g = &field.grid;
    let (nx, ny) = (g.nx, g.ny);
    let mut s = crate::util::Kahan::new();
    for j in 0..ny {
        for i in 0..nx {
            let c = g.idx(i, j);
            if !field.mask[c] {
                continue;
            }
            let mut div = 0.0;
            if i + 1 < nx && field.mask[c + 1] {
                div += p1[c];
            }
            if i > 0 && field.mask[c - 1] {
                div -= p1[c - 1];
            }
            if j + 1 < ny && field.mask[c + nx] {
                div += p2[c];
            }
            if j > 0 && field.mask[c - nx] {
                div -= p2[c - nx];
            }
            let term = if field.fixed[c] {
                field.vals[c] * div
            } else {
                (lo * div).max(hi * div)
            };
            s.add(term);
        }
    }
    -s.total()
}
