//! Bracketing root finders: bisection with optional Newton polish.

use crate::error::{Error, Result};

/// Root of `f` in [lo, hi] by bisection; requires a sign change.
/// Iterates until the bracket width drops below `tol` (absolute).
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    if !(a < b) {
        return Err(Error::InvalidParams(format!("bad bracket [{a}, {b}]")));
    }
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numerical(format!(
            "no sign change on [{a}, {b}]: f(a)={fa:.3e}, f(b)={fb:.3e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a < tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Newton iteration safeguarded by a bracket: falls back to bisection when a
/// step leaves [lo, hi]. `df` is the derivative of `f`.
pub fn newton_bracketed<F, D>(
    mut f: F,
    mut df: D,
    x0: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let mut x = x0.clamp(lo, hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        // Maintain the bracket.
        let flo = f(lo);
        if fx.signum() == flo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let step = if d != 0.0 { fx / d } else { f64::INFINITY };
        let mut next = x - step;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < tol {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Expands `hi` geometrically from `lo` until `f` changes sign, then returns
/// the bracket. Used to bracket the horizon radius from below.
pub fn expand_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    first_width: f64,
    factor: f64,
    max_expansions: usize,
) -> Result<(f64, f64)> {
    let flo = f(lo);
    let mut width = first_width;
    let mut a = lo;
    for _ in 0..max_expansions {
        let b = a + width;
        let fb = f(b);
        if fb == 0.0 || fb.signum() != flo.signum() {
            return Ok((a, b));
        }
        a = b;
        width *= factor;
    }
    Err(Error::Numerical(format!(
        "failed to bracket a sign change starting from {lo}"
    )))
}
