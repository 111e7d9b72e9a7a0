//! Bracketed scalar root finding: bisection to a tight abscissa tolerance,
//! then two Newton polish steps clamped to the bracket.

use crate::error::{Error, Result};

/// Finds the root of `g` in `[a, b]`. The bracket must be sign-changing
/// (weakly: endpoint zeros are accepted).
pub fn bisect_then_newton<G, Gp>(g: &G, gp: &Gp, a: f64, b: f64, xtol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    Gp: Fn(f64) -> f64,
{
    let ga = g(a);
    let gb = g(b);
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga.signum() == gb.signum() {
        return Err(Error::BracketFailure { a, b });
    }
    let (mut lo, mut hi) = (a, b);
    let mut glo = ga;
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..2 {
        let d = gp(x);
        if d != 0.0 {
            x = (x - g(x) / d).clamp(a, b);
        }
    }
    Ok(x)
}
