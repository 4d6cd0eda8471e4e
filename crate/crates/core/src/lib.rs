//! Multi-confocal elliptical channel model for large antenna arrays with
//! first-order delay drift across the array.
//!
//! The crate covers the model end to end:
//!
//! * [`math`]: modified Bessel functions of complex argument, quadrature, root finding.
//! * [`geometry`]: array offsets, AOA to AOD mapping, drift and exact delays.
//! * [`stochastic`]: von Mises angles, seeded streams, scatterer realizations.
//! * [`correlation`]: space-time-frequency correlation, closed forms and quadrature.
//! * [`delay_stats`]: array-variant PDP, delay moments, coherence bandwidth.
//! * [`montecarlo`]: brute-force estimators over finite realizations.
//! * [`experiment`]: configs, CSV output and figure runners behind `gbsm`.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlation;
pub mod delay_stats;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod math;
pub mod montecarlo;
pub mod stochastic;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex value used throughout the crate.
pub type ComplexValue = Complex64;

pub use correlation::{CorrelationGrid, CorrelationMethod, CorrelationQuery};
pub use delay_stats::{DelayMoments, PdpCurve};
pub use geometry::{AntennaIndex, ArrayConfig, EllipsePath, SPEED_OF_LIGHT};
pub use stochastic::{SeedSpec, VonMises};
