//! Adaptive Simpson quadrature with an absolute tolerance and a hard cap on
//! the number of subintervals.

use crate::error::{Error, Result};

const MAX_INTERVALS: usize = 1_000_000;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut budget = MAX_INTERVALS;
    recurse(f, a, b, fa, fm, fb, whole, tol, 60, &mut budget)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    budget: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || depth == 0 {
        return Ok(left + right + err / 15.0);
    }
    if *budget < 2 {
        return Err(Error::InvalidInput(
            "quadrature interval budget exhausted".into(),
        ));
    }
    *budget -= 2;
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?;
    Ok(l + r)
}
