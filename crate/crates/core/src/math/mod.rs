//! Numerical primitives: modified Bessel functions, quadrature and root finding.

pub mod bessel;
pub mod quadrature;
pub mod roots;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_ratio, inverse_i0, ln_bessel_i0};
pub use quadrature::{integrate, integrate_lenient, Integral, QuadratureSpec, Rule};
