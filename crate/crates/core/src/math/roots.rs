//! Scalar root finding and 1-D minimization.

use crate::error::{Error, Result};

/// Bisection on a bracketing interval `[lo, hi]` with `f(lo)` and `f(hi)` of
/// opposite sign (or one of them zero).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Search(format!(
            "[{lo}, {hi}] does not bracket a root (f = {f_lo}, {f_hi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `x > start` where `f` changes sign, located by scanning with a
/// fixed `step` up to `bound` and refining the first bracket by bisection.
pub fn first_sign_change<F>(mut f: F, start: f64, step: f64, bound: f64, x_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(step > 0.0) || !(bound > start) {
        return Err(Error::Domain(format!(
            "invalid scan: start {start}, step {step}, bound {bound}"
        )));
    }
    let mut x0 = start;
    let mut f0 = f(x0)?;
    let mut i = 1u64;
    loop {
        let x1 = (start + i as f64 * step).min(bound);
        let f1 = f(x1)?;
        if f1 == 0.0 || f1.signum() != f0.signum() {
            return bisect(&mut f, x0, x1, x_tol);
        }
        if x1 >= bound {
            return Err(Error::Search(format!(
                "no sign change in ({start}, {bound}]"
            )));
        }
        x0 = x1;
        f0 = f1;
        i += 1;
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_section_min<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}
