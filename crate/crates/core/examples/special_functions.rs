//! Modified Bessel functions of complex argument, the building block of
//! every closed form in the crate.

use gbsm_drift::math::bessel::{bessel_i, bessel_ratio, inverse_i0, ln_bessel_i0};
use gbsm_drift::Complex64;

fn main() -> gbsm_drift::Result<()> {
    println!("I0 on the real axis");
    for x in [0.0, 0.5, 1.0, 5.0, 20.0] {
        let v = bessel_i(0, Complex64::new(x, 0.0))?;
        println!("  I0({x:>4}) = {:.15e}", v.re);
    }

    // I0(jx) = J0(x): the first zero of J0 shows up on the imaginary axis
    let z = Complex64::new(0.0, 2.404_825_557_695_773);
    println!("|I0(j·2.4048)| = {:.2e}", bessel_i(0, z)?.norm());

    // large arguments stay finite in log form
    println!("ln I0(800) = {:.12}", ln_bessel_i0(800.0)?);

    println!("mean resultant length I1/I0");
    for kappa in [0.1, 1.0, 5.0, 10.0, 100.0] {
        println!("  kappa {kappa:>5}: {:.6}", bessel_ratio(1, kappa)?);
    }

    let y = 3.5;
    let x = inverse_i0(y)?;
    println!("I0^-1({y}) = {x:.12}, back: {:.12}", bessel_i(0, Complex64::new(x, 0.0))?.re);
    Ok(())
}
