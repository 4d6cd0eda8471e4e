//! Modified Bessel functions of the first kind, orders 0–2, for complex
//! argument, and the inverse of `I0` on the real half-line.
//!
//! Small arguments use the power series. When the series would cancel badly
//! (large imaginary part, the oscillatory `J_n` regime) or the argument is
//! large, the integral representation
//! `I_n(z) = (1/2π) ∫ e^{z cos θ} cos(nθ) dθ` over one period is evaluated
//! with the spectrally convergent trapezoid rule on the exponentially scaled
//! integrand.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{integrate, QuadratureSpec, Rule};
use crate::error::{Error, Result};

/// Largest supported `|z|`.
pub const MAX_ARGUMENT: f64 = 1e4;

const SERIES_MAX_MODULUS: f64 = 50.0;
// The series loses roughly e^{|z| - |Re z|} to cancellation.
const SERIES_MAX_CANCELLATION: f64 = 8.0;

fn check(order: u32, z: Complex64) -> Result<()> {
    if order > 2 {
        return Err(Error::Domain(format!(
            "only orders 0, 1 and 2 are supported, got {order}"
        )));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite Bessel argument {z}")));
    }
    if z.norm() > MAX_ARGUMENT {
        return Err(Error::Range(format!(
            "|z| = {} exceeds the supported range {MAX_ARGUMENT}",
            z.norm()
        )));
    }
    Ok(())
}

fn use_series(z: Complex64) -> bool {
    let modulus = z.norm();
    modulus <= SERIES_MAX_MODULUS && modulus - z.re.abs() <= SERIES_MAX_CANCELLATION
}

/// Power series `Σ (z/2)^{2k+n} / (k! (k+n)!)`.
pub(crate) fn series(order: u32, z: Complex64) -> Complex64 {
    let half = z * 0.5;
    let quarter_sq = half * half;
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..=order {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut magnitude = term.norm();
    for k in 1..1000u32 {
        term *= quarter_sq / (k as f64 * (k + order) as f64);
        sum += term;
        let t = term.norm();
        magnitude += t;
        if t <= 1e-17 * magnitude {
            break;
        }
    }
    sum
}

/// `e^{-Re w} I_n(w)` for `Re w ≥ 0` from the integral representation.
fn integral_scaled(order: u32, w: Complex64) -> Result<Complex64> {
    let n = order as f64;
    let spec = QuadratureSpec {
        rule: Rule::Trapezoid,
        abs_tol: 1e-15,
        rel_tol: 1e-15,
        max_nodes: 1 << 17,
    };
    let integral = integrate(
        |theta| (w * (theta.cos() - 1.0)).exp() * (n * theta).cos(),
        0.0,
        2.0 * PI,
        &spec,
    )
    .or_else(|e| match e {
        // roundoff floor reached before the nominal tolerance
        Error::Accuracy { estimate, error, nodes } if error < 1e-13 => Ok(super::quadrature::Integral {
            value: estimate,
            error,
            nodes,
        }),
        other => Err(other),
    })?;
    Ok(integral.value / (2.0 * PI) * Complex64::from_polar(1.0, w.im))
}

/// Exponentially scaled Bessel function `e^{-|Re z|} I_n(z)`.
pub fn bessel_i_scaled(order: u32, z: Complex64) -> Result<Complex64> {
    check(order, z)?;
    if use_series(z) {
        return Ok(series(order, z) * (-z.re.abs()).exp());
    }
    if z.re >= 0.0 {
        integral_scaled(order, z)
    } else {
        // I_n(-z) = (-1)^n I_n(z)
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(integral_scaled(order, -z)? * sign)
    }
}

/// Modified Bessel function of the first kind `I_n(z)` for `n ∈ {0, 1, 2}`.
pub fn bessel_i(order: u32, z: Complex64) -> Result<Complex64> {
    let scaled = bessel_i_scaled(order, z)?;
    let growth = z.re.abs();
    let value = if growth < 700.0 {
        scaled * growth.exp()
    } else {
        // split the exponent so intermediate results stay finite as long as the answer does
        scaled * (growth - 700.0).exp() * 700f64.exp()
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Range(format!("I_{order}({z}) overflows f64")));
    }
    Ok(value)
}

/// `I_n(x) / I_0(x)` for real `x`, computed without overflow.
pub fn bessel_ratio(order: u32, x: f64) -> Result<f64> {
    let z = Complex64::new(x, 0.0);
    Ok(bessel_i_scaled(order, z)?.re / bessel_i_scaled(0, z)?.re)
}

/// `ln I_0(x)` for real `x`.
pub fn ln_bessel_i0(x: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(0, Complex64::new(x, 0.0))?.re;
    Ok(scaled.ln() + x.abs())
}

/// Inverse of `I_0` on `[0, ∞)`.
///
/// Brackets the root in the log domain (`I_0` grows like `e^x/√(2πx)`) and
/// refines with safeguarded Newton steps on `ln I_0(x) − ln y`.
pub fn inverse_i0(y: f64) -> Result<f64> {
    if !(y >= 1.0) || !y.is_finite() {
        return Err(Error::Domain(format!(
            "I0 maps [0, inf) onto [1, inf); no real inverse for {y}"
        )));
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    let target = y.ln();
    let residual = |x: f64| -> Result<f64> { Ok(ln_bessel_i0(x)? - target) };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while residual(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_ARGUMENT {
            return Err(Error::Range(format!("inverse of I0 at {y} exceeds {MAX_ARGUMENT}")));
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = residual(x)?;
        if g.abs() <= 1e-15 {
            return Ok(x);
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = bessel_ratio(1, x)?;
        let newton = x - g / slope;
        x = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(x);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_i(0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(bessel_i(1, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(bessel_i(2, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn first_zero_of_j0_on_imaginary_axis() {
        let v = bessel_i(0, c(0.0, 2.404826)).unwrap();
        assert!(v.norm() < 1e-6, "{v}");
    }

    #[test]
    fn reference_values() {
        // 25-digit references
        let cases = [
            (0, c(3.0, 4.0), c(-3.392487788275519609716626, -1.323945891628726481490412)),
            (1, c(-2.0, 7.0), c(-1.052626448466474742792439, 0.1278622785403755917621469)),
            (2, c(0.0, 12.0), c(0.08493049487860480535176131, 0.0)),
            (0, c(30.0, 20.0), c(467552526671.99234464173, 537057285782.0711267169647)),
            (1, c(0.1, -45.0), c(0.01153794390170698876287411, -0.02850346654183095707548895)),
            (0, c(0.0, 200.0), c(-0.01543743993056509159192285, 0.0)),
            (2, c(150.0, 300.0), c(-1.635909951409035394205642e63, -2.548508647806867516815295e63)),
        ];
        for (n, z, expected) in cases {
            let got = bessel_i(n, z).unwrap();
            assert!(rel(got, expected) < 1e-12, "I_{n}({z}) = {got}, expected {expected}");
        }
    }

    #[test]
    fn odd_order_flips_sign_under_negation() {
        let z = c(-60.0, 10.0);
        let a = bessel_i(1, z).unwrap();
        let b = bessel_i(1, -z).unwrap();
        assert!(rel(a, -b) < 1e-12);
    }

    #[test]
    fn range_errors() {
        assert!(matches!(bessel_i(0, c(2e4, 0.0)), Err(Error::Range(_))));
        assert!(matches!(bessel_i(0, c(800.0, 0.0)), Err(Error::Range(_))));
        assert!(bessel_i_scaled(0, c(800.0, 0.0)).unwrap().re.is_finite());
        assert!(matches!(bessel_i(3, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse_i0(1.0).unwrap(), 0.0);
        let i0_2 = bessel_i(0, c(2.0, 0.0)).unwrap().re;
        assert!((inverse_i0(i0_2).unwrap() - 2.0).abs() < 1e-10);
        // I0(4) = 11.301921952136330...
        assert!((inverse_i0(11.30192).unwrap() - 4.0).abs() < 1e-5);
        // I0(3) = 4.880792585865024...
        assert!((inverse_i0(4.880792585865024).unwrap() - 3.0).abs() < 1e-10);
        assert!(matches!(inverse_i0(0.5), Err(Error::Domain(_))));
        assert!(matches!(inverse_i0(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn ratio_large_argument() {
        let r = bessel_ratio(1, 5000.0).unwrap();
        // I1/I0 ≈ 1 - 1/(2x) - 1/(8x²)
        assert!((r - (1.0 - 1.0 / 10000.0 - 1.0 / (8.0 * 25e6))).abs() < 1e-10);
    }
}
