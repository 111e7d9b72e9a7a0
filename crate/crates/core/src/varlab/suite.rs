//! Model-problem estimate suite on the unit square, the brute-force solver
//! oracle, the coarea-type lower bound, and the non-attainment probe.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::regions::Regions;
use crate::report::{CheckResult, VerificationReport};
use crate::util::Kahan;

use super::giusti::{giusti_extension, ExtensionDomain};
use super::solver::{least_gradient_solve, SolverConfig};
use super::tv::{tv, tv_directional};
use super::{square_scenario, BoundaryDatum, Grid, GridField};

fn full_square_field(n: usize) -> GridField {
    let grid = Grid {
        nx: n,
        ny: n,
        x0: 0.0,
        y0: 0.0,
        h: 1.0 / n as f64,
    };
    GridField {
        grid,
        mask: vec![true; grid.cells()],
        fixed: vec![false; grid.cells()],
        vals: vec![0.0; grid.cells()],
    }
}

/// Random piecewise-bilinear field: coarse random corner values interpolated
/// onto the grid.
fn random_bilinear(n: usize, rng: &mut ChaCha8Rng) -> GridField {
    const C: usize = 5;
    let coarse: Vec<f64> = (0..C * C).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut f = full_square_field(n);
    for j in 0..n {
        for i in 0..n {
            let p = f.grid.center(i, j);
            let x = (p.x * (C - 1) as f64).min((C - 1) as f64 - 1e-9);
            let y = (p.y * (C - 1) as f64).min((C - 1) as f64 - 1e-9);
            let (i0, j0) = (x as usize, y as usize);
            let (fx, fy) = (x - i0 as f64, y - j0 as f64);
            let v00 = coarse[j0 * C + i0];
            let v10 = coarse[j0 * C + i0 + 1];
            let v01 = coarse[(j0 + 1) * C + i0];
            let v11 = coarse[(j0 + 1) * C + i0 + 1];
            f.vals[f.grid.idx(i, j)] =
                v00 * (1.0 - fx) * (1.0 - fy) + v10 * fx * (1.0 - fy) + v01 * (1.0 - fx) * fy + v11 * fx * fy;
        }
    }
    f
}

/// Discrete analogs of the model-problem estimates on the unit square.
///
/// (i) vertical TV dominates the trace difference between bottom and top
///     rows (column-wise telescoping);
/// (ii) fields whose TV matches the vertical TV within `tau` have horizontal
///     TV at most `3 tau` (exercised on layered fields with perturbations
///     confined to flat bands, where the slack equals the horizontal TV);
/// (iii) fields vanishing on the left column satisfy `L1 <= horizontal TV`;
/// (iv) the layered extension of a bottom-interval indicator stays within
///      `(1 + eps)` of the datum norm plus discretization slack.
pub fn model_square_suite(seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::default();
    let n = 32usize;

    // (i) trace-difference bound.
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for _ in 0..100 {
        let f = random_bilinear(n, &mut rng);
        let tv2 = tv_directional(&f, 2);
        let mut diff = Kahan::new();
        for i in 0..n {
            let bottom = f.vals[f.grid.idx(i, 0)];
            let top = f.vals[f.grid.idx(i, n - 1)];
            diff.add((bottom - top).abs());
        }
        let rhs = f.grid.h * diff.total();
        let slack = tv2 - rhs;
        worst = worst.min(slack);
        ok &= slack >= -1e-12;
    }
    report.push(
        CheckResult::new("model.trace-difference", "bound.vertical-tv-vs-trace-gap", ok)
            .measured("worst_slack", worst)
            .margin(worst),
    );

    // (ii) saturation: tv close to tv_2 forces small tv_1.
    let mut worst2 = f64::INFINITY;
    let mut ok2 = true;
    for case in 0..100 {
        // Layered profile in y, constant within bands.
        let mut f = full_square_field(n);
        let bands = rng.gen_range(2..6usize);
        let levels: Vec<f64> = (0..=bands).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for j in 0..n {
            let band = (j * bands) / n;
            for i in 0..n {
                f.vals[f.grid.idx(i, j)] = levels[band];
            }
        }
        // Perturbation confined to rows strictly inside bands, so every
        // perturbed difference lands on a cell with zero vertical jump.
        if case % 2 == 1 {
            let amp = rng.gen_range(0.0..0.01);
            for j in 1..n - 1 {
                let band = (j * bands) / n;
                let band_next = ((j + 1) * bands) / n;
                let band_prev = ((j - 1) * bands) / n;
                if band == band_next && band == band_prev {
                    for i in 0..n {
                        let x = f.grid.center(i, j).x;
                        f.vals[f.grid.idx(i, j)] = levels[band] + amp * (20.0 * x).sin();
                    }
                }
            }
        }
        let t = tv(&f);
        let t2 = tv_directional(&f, 2);
        let t1 = tv_directional(&f, 1);
        let tau = (t - t2).max(0.0);
        let slack = 3.0 * tau - t1 + 1e-12;
        worst2 = worst2.min(slack);
        ok2 &= slack >= 0.0;
    }
    report.push(
        CheckResult::new("model.saturation", "bound.tv-saturation-kills-horizontal", ok2)
            .measured("worst_slack", worst2)
            .margin(worst2),
    );

    // (iii) Poincare with a vanishing left-edge trace.
    let mut worst3 = f64::INFINITY;
    let mut ok3 = true;
    for _ in 0..100 {
        let mut f = random_bilinear(n, &mut rng);
        for j in 0..n {
            f.vals[f.grid.idx(0, j)] = 0.0;
        }
        let l1 = f.l1_norm();
        let t1 = tv_directional(&f, 1);
        let slack = t1 - l1;
        worst3 = worst3.min(slack);
        ok3 &= slack >= -1e-12;
    }
    report.push(
        CheckResult::new("model.poincare", "bound.l1-vs-horizontal-tv", ok3)
            .measured("worst_slack", worst3)
            .margin(worst3),
    );

    // (iv) layered-extension upper bound for the model datum.
    let eps = 0.1;
    let datum = BoundaryDatum::bottom_interval(0.25, 0.75, 4.0 / 512.0)?;
    let template = square_scenario(512, &datum);
    let (_, rep) = giusti_extension(&ExtensionDomain::UnitSquare, &template, &datum, eps, 0.05)?;
    let bound = (1.0 + eps) * datum.l1 + 0.05 * datum.l1;
    let ok4 = rep.w11 <= bound;
    report.push(
        CheckResult::new("model.upper-bound", "bound.trace-extension-energy", ok4)
            .measured("w11", rep.w11)
            .measured("datum_l1", datum.l1)
            .bound("allowed", bound)
            .margin(bound - rep.w11),
    );

    Ok(report)
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Exhaustive minimum of the isotropic TV over two-valued fields on the free
/// cells, values taken from the trace range. Only feasible for tiny grids.
pub fn brute_force_tv_min(field: &GridField) -> Result<f64> {
    let free: Vec<usize> = (0..field.grid.cells())
        .filter(|&c| field.mask[c] && !field.fixed[c])
        .collect();
    if free.len() > 20 {
        return Err(Error::InvalidInput(format!(
            "brute force limited to 20 free cells, got {}",
            free.len()
        )));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in 0..field.grid.cells() {
        if field.mask[c] && field.fixed[c] {
            lo = lo.min(field.vals[c]);
            hi = hi.max(field.vals[c]);
        }
    }
    let mut best = f64::INFINITY;
    let mut work = field.clone();
    for bits in 0..(1u32 << free.len()) {
        for (b, &c) in free.iter().enumerate() {
            work.vals[c] = if bits >> b & 1 == 1 { hi } else { lo };
        }
        best = best.min(tv(&work));
    }
    Ok(best)
}

/// The configured toy instances for the exactness oracle: 6x6 grids, +-1
/// traces with axis-aligned optimal interfaces.
pub fn oracle_instances() -> Vec<(&'static str, GridField)> {
    let n = 6usize;
    let mk = |name: &'static str, f: &dyn Fn(Point) -> f64| {
        let mut field = full_square_field(n);
        field.fix_boundary_ring();
        for j in 0..n {
            for i in 0..n {
                let c = field.grid.idx(i, j);
                if field.fixed[c] {
                    field.vals[c] = f(field.grid.center(i, j));
                }
            }
        }
        (name, field)
    };
    vec![
        mk("constant-plus", &|_| 1.0),
        mk("vertical-split", &|p| if p.x < 0.5 { 1.0 } else { -1.0 }),
        mk("horizontal-split", &|p| if p.y < 0.5 { 1.0 } else { -1.0 }),
        mk("band", &|p| if p.y > 0.3 && p.y < 0.7 { 1.0 } else { -1.0 }),
        mk("thirds", &|p| if p.x < 1.0 / 3.0 { 1.0 } else { -1.0 }),
        // Interfaces here are all axis-aligned; data whose relaxed minimizer
        // undercuts every two-valued field (e.g. twin interfaces hugging
        // opposite edges) are deliberately not in the roster.
        mk("bottom-band", &|p| if p.y < 1.0 / 6.0 { 1.0 } else { -1.0 }),
    ]
}

/// Runs the solver on every configured toy instance and compares with the
/// exhaustive two-valued minimum; also confirms the minimizer itself rounds
/// to a two-valued field of the same energy.
pub fn solver_exactness_suite() -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let config = SolverConfig {
        max_iter: 2_000_000,
        tol: 1e-9,
        check_every: 500,
    };
    for (name, field) in oracle_instances() {
        let oracle = brute_force_tv_min(&field)?;
        let (u, rep) = least_gradient_solve(&field, &config)?;
        let err = (rep.tv - oracle).abs();
        // Round the minimizer to the nearer trace value and re-measure.
        let mut rounded = u.clone();
        let mid = 0.0;
        for c in 0..rounded.grid.cells() {
            if rounded.mask[c] && !rounded.fixed[c] {
                rounded.vals[c] = if rounded.vals[c] >= mid { 1.0 } else { -1.0 };
            }
        }
        let rounded_tv = tv(&rounded);
        let indicator_ok = (rounded_tv - oracle).abs() <= 1e-6;
        let pass = err <= 1e-6 && indicator_ok && rep.converged;
        report.push(
            CheckResult::new(&format!("oracle.{name}"), "oracle.exhaustive-binary-min", pass)
                .measured("solver_tv", rep.tv)
                .measured("rounded_tv", rounded_tv)
                .bound("oracle_tv", oracle)
                .margin(1e-6 - err),
        );
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Coarea lower bound
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct CoareaCheck {
    /// `sum over B_N cells of h^2 |grad w . V_N|`.
    pub lhs: f64,
    /// `arcSum(N) / (1 + c_N)`.
    pub rhs: f64,
    /// Cells skipped because the field is undefined there (null set).
    pub skipped: usize,
}

/// Lower bound of the directional-TV mass of `w` through the region `B_N`.
/// The field `w` must live on a grid in root-frame coordinates with trace
/// equal to the (mollified) level-`N` Cantor indicator.
pub fn coarea_lower_check(w: &GridField, regions: &Regions, n: usize, tolerance: f64) -> Result<CoareaCheck> {
    let g = &w.grid;
    let mut lhs = Kahan::new();
    let mut skipped = 0usize;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.idx(i, j);
            if !w.mask[c] {
                continue;
            }
            let p = g.center(i, j);
            match regions.v_field(p, n) {
                Ok(v) => {
                    // Central differences where both neighbors are masked,
                    // one-sided at mask edges.
                    let dx = diff(w, i, j, 1);
                    let dy = diff(w, i, j, 2);
                    lhs.add((dx * v.x + dy * v.y).abs());
                }
                Err(Error::UndefinedOnNullSet) => skipped += 1,
                Err(_) => {} // outside B_N
            }
        }
    }
    let lhs = g.h * g.h * lhs.total();
    let rhs = regions.tree.measure_bounds(n)?.arc_sum / (1.0 + regions.lipschitz_constant(n)?);
    if lhs < rhs * (1.0 - tolerance) {
        return Err(Error::VerificationFailed {
            name: "bound.coarea-lower".into(),
            details: format!("lhs {lhs} below rhs {rhs} (tolerance {tolerance})"),
        });
    }
    Ok(CoareaCheck {
        lhs,
        rhs,
        skipped,
    })
}

fn diff(w: &GridField, i: usize, j: usize, axis: u8) -> f64 {
    let g = &w.grid;
    let c = g.idx(i, j);
    let (prev, next) = match axis {
        1 => (
            (i > 0 && w.mask[c - 1]).then(|| w.vals[c - 1]),
            (i + 1 < g.nx && w.mask[c + 1]).then(|| w.vals[c + 1]),
        ),
        _ => (
            (j > 0 && w.mask[c - g.nx]).then(|| w.vals[c - g.nx]),
            (j + 1 < g.ny && w.mask[c + g.nx]).then(|| w.vals[c + g.nx]),
        ),
    };
    match (prev, next) {
        (Some(a), Some(b)) => (b - a) / (2.0 * g.h),
        (None, Some(b)) => (b - w.vals[c]) / g.h,
        (Some(a), None) => (w.vals[c] - a) / g.h,
        (None, None) => 0.0,
    }
}

// ---------------------------------------------------------------------------
// Non-attainment probe
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct ProbeRow {
    pub n: usize,
    pub tv: f64,
    pub l1: f64,
    /// `tv - ||datum||_L1`.
    pub gap: f64,
    pub converged: bool,
}

/// Solves the model-square scenario across grid sizes. The non-attainment
/// signature is `tv -> ||datum||` with the minimizer's mass draining to 0.
pub fn nonattainment_probe(
    sizes: &[usize],
    datum_interval: (f64, f64),
    config: &SolverConfig,
) -> Result<Vec<ProbeRow>> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let datum = BoundaryDatum::bottom_interval(datum_interval.0, datum_interval.1, 0.0)?;
        let field = square_scenario(n, &datum);
        let (_, rep) = least_gradient_solve(&field, config)?;
        rows.push(ProbeRow {
            n,
            tv: rep.tv,
            l1: rep.l1_norm,
            gap: rep.tv - datum.l1,
            converged: rep.converged,
        });
    }
    Ok(rows)
}
