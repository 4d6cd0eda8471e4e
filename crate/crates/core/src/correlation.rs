//! Space-time-frequency correlation of the channel transfer function and its
//! spatial (SCF) and frequency (FCF) marginals.
//!
//! Expectations over the AOA law are computed with the trapezoid rule over one
//! period, which converges spectrally for these smooth periodic integrands,
//! falling back to adaptive Gauss–Kronrod when the trapezoid estimate is not
//! within `1e-9`. For von Mises AOAs and a receive-side lag only, the
//! expectation has the closed form
//! `E[e^{jx cos(α−β)}] = I0(√(κ² − x² + j2κx cos(β−μ))) / I0(κ)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{aoa_to_aod, element_offset, AntennaIndex, ArrayConfig, EllipsePath, Side, SPEED_OF_LIGHT};
use crate::math::bessel::bessel_i_scaled;
use crate::math::quadrature::{integrate, integrate_lenient, QuadratureSpec};
use crate::stochastic::{normalized_gains, VonMises};

/// Lags and antenna pairs of `E[H*_qp(t, f) H_q'p'(t + Δt, f + ν)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationQuery {
    /// Time lag, s.
    pub delta_t: f64,
    /// Frequency offset from the carrier, Hz.
    pub f: f64,
    /// Frequency lag, Hz.
    pub nu: f64,
    pub p: AntennaIndex,
    pub p_prime: AntennaIndex,
    pub q: AntennaIndex,
    pub q_prime: AntennaIndex,
}

impl CorrelationQuery {
    /// Autocorrelation of the link `A_p → A_q` at zero lags.
    pub fn new(p: usize, q: usize) -> Self {
        Self {
            delta_t: 0.0,
            f: 0.0,
            nu: 0.0,
            p: AntennaIndex::tx(p),
            p_prime: AntennaIndex::tx(p),
            q: AntennaIndex::rx(q),
            q_prime: AntennaIndex::rx(q),
        }
    }

    pub fn with_partner(mut self, p_prime: usize, q_prime: usize) -> Self {
        self.p_prime = AntennaIndex::tx(p_prime);
        self.q_prime = AntennaIndex::rx(q_prime);
        self
    }

    pub fn with_lags(mut self, delta_t: f64, f: f64, nu: f64) -> Self {
        self.delta_t = delta_t;
        self.f = f;
        self.nu = nu;
        self
    }

    fn check_sides(&self) -> Result<()> {
        let tx = [self.p, self.p_prime].iter().all(|a| a.side == Side::Tx);
        let rx = [self.q, self.q_prime].iter().all(|a| a.side == Side::Rx);
        if tx && rx {
            Ok(())
        } else {
            Err(Error::Domain("p, p' must be Tx and q, q' Rx antennas".into()))
        }
    }
}

/// How a correlation value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl CorrelationMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            CorrelationMethod::ClosedForm => "closed-form",
            CorrelationMethod::Quadrature => "quadrature",
            CorrelationMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub samples: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, unit: &str, samples: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
            samples,
        }
    }

    /// `n` evenly spaced samples from `start` to `stop` inclusive.
    pub fn linspace(name: &str, unit: &str, start: f64, stop: f64, n: usize) -> Self {
        let samples = match n {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..n)
                .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                .collect(),
        };
        Self::new(name, unit, samples)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Common spacing of a uniform axis.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.samples.len() < 2 {
            return None;
        }
        let step = self.samples[1] - self.samples[0];
        let span = (self.samples[self.samples.len() - 1] - self.samples[0]).abs();
        let uniform = self
            .samples
            .windows(2)
            .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * span.max(step.abs()));
        (uniform && step > 0.0).then_some(step)
    }
}

/// Sampled correlation function over a product grid, row-major in `axes`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationGrid {
    pub axes: Vec<Axis>,
    pub values: Vec<Complex64>,
    pub method: CorrelationMethod,
    pub config_hash: Option<String>,
    pub seed: Option<u64>,
}

impl CorrelationGrid {
    pub fn new(axes: Vec<Axis>, values: Vec<Complex64>, method: CorrelationMethod) -> Result<Self> {
        let expected: usize = axes.iter().map(Axis::len).product();
        if expected != values.len() {
            return Err(Error::Config(format!(
                "grid shape {:?} holds {expected} values, got {}",
                axes.iter().map(Axis::len).collect::<Vec<_>>(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Range("non-finite correlation value".into()));
        }
        Ok(Self {
            axes,
            values,
            method,
            config_hash: None,
            seed: None,
        })
    }

    /// Evaluate `f` at every sample of a single axis, in parallel.
    pub fn sweep<F>(axis: Axis, method: CorrelationMethod, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        let values = axis.samples.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::new(vec![axis], values, method)
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

/// `E[g(α)]` under the von Mises law `d`.
pub fn von_mises_expectation<F>(d: &VonMises, g: F) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let integrand = |a: f64| g(a) * d.pdf(a);
    match integrate_lenient(integrand, 0.0, TAU, &QuadratureSpec::periodic(), 1e-9) {
        Ok(i) => Ok(i.value),
        Err(Error::Accuracy { .. }) => {
            Ok(integrate(integrand, 0.0, TAU, &QuadratureSpec::gauss_kronrod())?.value)
        }
        Err(e) => Err(e),
    }
}

/// Closed form of `E[e^{jx cos(α−β)}]` for `α ~ VonMises(μ, κ)`.
pub fn von_mises_characteristic(d: &VonMises, x: f64, beta: f64) -> Result<Complex64> {
    let kappa = d.kappa();
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let w = Complex64::new(kappa * kappa - x * x, 2.0 * kappa * x * (beta - d.mu()).cos()).sqrt();
    // ratio of scaled functions, e^{-|Re w|} I0(w) / (e^{-κ} I0(κ))
    let num = bessel_i_scaled(0, w)?;
    let den = bessel_i_scaled(0, Complex64::new(kappa, 0.0))?.re;
    Ok(num / den * (w.re.abs() - kappa).exp())
}

fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Space-time-frequency correlation `Γ_{qp,q'p'}(Δt, f, ν)` by quadrature.
pub fn stfcf(cfg: &ArrayConfig, paths: &[EllipsePath], query: &CorrelationQuery) -> Result<Complex64> {
    cfg.validate()?;
    query.check_sides()?;
    let gains = normalized_gains(paths)?;
    let delta_p = element_offset(cfg, query.p)?;
    let delta_pp = element_offset(cfg, query.p_prime)?;
    let delta_q = element_offset(cfg, query.q)?;
    let delta_qq = element_offset(cfg, query.q_prime)?;
    let fa = cfg.f0 + query.f;
    // coefficients of cos(α_T − β_T) and cos(α_R − β_R) in the phase
    let tx_coef = TAU / SPEED_OF_LIGHT * ((delta_pp - delta_p) * fa + delta_pp * query.nu);
    let rx_coef = TAU / SPEED_OF_LIGHT * ((delta_qq - delta_q) * fa + delta_qq * query.nu);
    let doppler_coef = TAU * cfg.f_max() * query.delta_t;
    let mut total = Complex64::new(0.0, 0.0);
    for (path, c) in paths.iter().zip(gains) {
        let inner = if tx_coef == 0.0 {
            von_mises_expectation(&path.aoa, |a| {
                phase(rx_coef * (a - cfg.beta_r).cos() + doppler_coef * (a - cfg.alpha_v).cos())
            })?
        } else {
            // surface a missing eccentricity before integrating
            aoa_to_aod(path, 1.0)?;
            von_mises_expectation(&path.aoa, |a| {
                let aod = aoa_to_aod(path, a).unwrap_or(f64::NAN);
                phase(
                    tx_coef * (aod - cfg.beta_t).cos()
                        + rx_coef * (a - cfg.beta_r).cos()
                        + doppler_coef * (a - cfg.alpha_v).cos(),
                )
            })?
        };
        total += c * c * phase(-TAU * query.nu * path.tau0) * inner;
    }
    Ok(total)
}

/// Frequency-variant spatial correlation at absolute frequency `f0 + f` for
/// Tx and Rx element separations `Δ_pp'` and `Δ_qq'`.
pub fn scf_numeric(cfg: &ArrayConfig, paths: &[EllipsePath], f: f64, delta_pp: f64, delta_qq: f64) -> Result<Complex64> {
    cfg.validate()?;
    if !(cfg.f0 + f > 0.0) {
        return Err(Error::Domain(format!("absolute frequency f0 + f must be positive, got {}", cfg.f0 + f)));
    }
    let gains = normalized_gains(paths)?;
    let scale = TAU * (cfg.f0 + f) / SPEED_OF_LIGHT;
    let mut total = Complex64::new(0.0, 0.0);
    for (path, c) in paths.iter().zip(gains) {
        let inner = if delta_pp == 0.0 {
            von_mises_expectation(&path.aoa, |a| phase(scale * delta_qq * (a - cfg.beta_r).cos()))?
        } else {
            aoa_to_aod(path, 1.0)?;
            von_mises_expectation(&path.aoa, |a| {
                let aod = aoa_to_aod(path, a).unwrap_or(f64::NAN);
                phase(scale * (delta_pp * (aod - cfg.beta_t).cos() + delta_qq * (a - cfg.beta_r).cos()))
            })?
        };
        total += c * c * inner;
    }
    Ok(total)
}

/// Receive-side spatial correlation of one von Mises path at `f0 + f`.
pub fn scf_closed(d: &VonMises, f: f64, delta_qq: f64, beta_r: f64, cfg: &ArrayConfig) -> Result<Complex64> {
    if !(cfg.f0 + f > 0.0) {
        return Err(Error::Domain(format!("absolute frequency f0 + f must be positive, got {}", cfg.f0 + f)));
    }
    von_mises_characteristic(d, TAU * (cfg.f0 + f) * delta_qq / SPEED_OF_LIGHT, beta_r)
}

/// Conventional narrowband spatial correlation, evaluated at the carrier.
pub fn scf_narrowband(d: &VonMises, delta_qq: f64, beta_r: f64, cfg: &ArrayConfig) -> Result<Complex64> {
    scf_closed(d, 0.0, delta_qq, beta_r, cfg)
}

/// Frequency correlation `R_qp(ν) = Σ c² e^{−j2πντ₀} r̃_qp(ν)` with the
/// path-level factor kept inside the sum.
pub fn fcf(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex, p: AntennaIndex, nu: f64) -> Result<Complex64> {
    cfg.validate()?;
    let gains = normalized_gains(paths)?;
    let delta_p = element_offset(cfg, p)?;
    let delta_q = element_offset(cfg, q)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (path, c) in paths.iter().zip(gains) {
        let inner = if delta_p == 0.0 {
            path_fcf_closed(&path.aoa, delta_q, cfg.beta_r, nu)?
        } else {
            path_fcf_numeric(cfg, path, delta_p, delta_q, nu)?
        };
        total += c * c * phase(-TAU * nu * path.tau0) * inner;
    }
    Ok(total)
}

/// Tapped-delay-line frequency correlation `Σ c² e^{−j2πντ₀} / Σ c²`.
pub fn fcf_taps(paths: &[EllipsePath], nu: f64) -> Complex64 {
    let power: f64 = paths.iter().map(|p| p.gain * p.gain).sum();
    let sum: Complex64 = paths
        .iter()
        .map(|p| p.gain * p.gain * phase(-TAU * nu * p.tau0))
        .sum();
    sum / power
}

/// Path-level frequency correlation for element offsets `δ_p`, `δ_q`, by quadrature.
pub fn path_fcf_numeric(cfg: &ArrayConfig, path: &EllipsePath, delta_p: f64, delta_q: f64, nu: f64) -> Result<Complex64> {
    let scale = TAU * nu / SPEED_OF_LIGHT;
    if delta_p == 0.0 {
        return von_mises_expectation(&path.aoa, |a| phase(scale * delta_q * (a - cfg.beta_r).cos()));
    }
    aoa_to_aod(path, 1.0)?;
    von_mises_expectation(&path.aoa, |a| {
        let aod = aoa_to_aod(path, a).unwrap_or(f64::NAN);
        phase(scale * (delta_p * (aod - cfg.beta_t).cos() + delta_q * (a - cfg.beta_r).cos()))
    })
}

/// Receive-side path-level frequency correlation in closed form.
pub fn path_fcf_closed(d: &VonMises, delta_q: f64, beta_r: f64, nu: f64) -> Result<Complex64> {
    von_mises_characteristic(d, TAU * delta_q * nu / SPEED_OF_LIGHT, beta_r)
}

/// Relative gap `|Γ(Δt, f, ν) − Γ(Δt, f, 0)·r(ν)| / |Γ(Δt, f, ν)|` between the
/// correlation and its separable approximation.
pub fn separability_gap(cfg: &ArrayConfig, paths: &[EllipsePath], query: &CorrelationQuery) -> Result<f64> {
    let full = stfcf(cfg, paths, query)?;
    let st = stfcf(cfg, paths, &query.with_lags(query.delta_t, query.f, 0.0))?;
    let approx = st * fcf_taps(paths, query.nu);
    Ok((full - approx).norm() / full.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::bessel::bessel_i;
    use std::f64::consts::{FRAC_PI_2, PI};

    const F0: f64 = 2e9;

    fn lambda() -> f64 {
        SPEED_OF_LIGHT / F0
    }

    fn vm(mu: f64, kappa: f64) -> VonMises {
        VonMises::new(mu, kappa).unwrap()
    }

    fn single(d: VonMises) -> Vec<EllipsePath> {
        vec![EllipsePath::new(50e-9, 1.0, d, 100).with_k(1.8)]
    }

    #[test]
    fn zero_lag_is_unity() {
        let cfg = ArrayConfig::new(F0).with_rx(4, lambda() / 2.0, 0.3).with_motion(10.0, 0.0);
        let paths = vec![
            EllipsePath::new(10e-9, 0.8, vm(1.0, 3.0), 10).with_k(2.0),
            EllipsePath::new(70e-9, 0.6, vm(4.0, 0.0), 10).with_k(2.0),
        ];
        let g = stfcf(&cfg, &paths, &CorrelationQuery::new(1, 3)).unwrap();
        assert!((g - 1.0).norm() < 1e-12);
    }

    #[test]
    fn isotropic_half_wavelength_scf() {
        let cfg = ArrayConfig::new(F0);
        let expected = -0.304_242_177_644_093_9;
        let num = scf_numeric(&cfg, &single(VonMises::uniform()), 0.0, 0.0, lambda() / 2.0).unwrap();
        assert!((num.re - expected).abs() < 1e-12 && num.im.abs() < 1e-12);
        let closed = scf_narrowband(&VonMises::uniform(), lambda() / 2.0, 0.0, &cfg).unwrap();
        assert!((closed.re - expected).abs() < 1e-12);
        assert_eq!(closed, scf_closed(&VonMises::uniform(), 0.0, lambda() / 2.0, 0.0, &cfg).unwrap());
        assert_eq!(scf_numeric(&cfg, &single(vm(1.0, 4.0)), 0.3e9, 0.0, 0.0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn stfcf_reduces_to_scf() {
        let cfg = ArrayConfig::new(F0).with_rx(3, lambda() / 2.0, 0.2).with_tx(2, lambda(), 0.5);
        let paths = single(vm(2.0, 2.5));
        let q = CorrelationQuery::new(1, 1).with_partner(2, 3).with_lags(0.0, 0.4e9, 0.0);
        let g = stfcf(&cfg, &paths, &q).unwrap();
        let d_pp = element_offset(&cfg, AntennaIndex::tx(2)).unwrap() - element_offset(&cfg, AntennaIndex::tx(1)).unwrap();
        let d_qq = element_offset(&cfg, AntennaIndex::rx(3)).unwrap() - element_offset(&cfg, AntennaIndex::rx(1)).unwrap();
        let s = scf_numeric(&cfg, &paths, 0.4e9, d_pp, d_qq).unwrap();
        assert!((g - s).norm() < 1e-12);
    }

    #[test]
    fn stfcf_matches_path_fcf_closed() {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.0);
        let d = vm(FRAC_PI_2, 5.0);
        let paths = vec![EllipsePath::new(0.0, 1.0, d, 1)];
        for nu in [1e6, 2e7, -3.5e7] {
            let g = stfcf(&cfg, &paths, &CorrelationQuery::new(1, 88).with_lags(0.0, 0.0, nu)).unwrap();
            let delta = element_offset(&cfg, AntennaIndex::rx(88)).unwrap();
            let c = path_fcf_closed(&d, delta, 0.0, nu).unwrap();
            assert!((g - c).norm() < 1e-10);
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let cfg = ArrayConfig::new(F0);
        for kappa in [0.0, 1.0, 5.0, 10.0] {
            for delta in [lambda() / 4.0, lambda() / 2.0, 2.0 * lambda()] {
                for f in [-0.5e9, 0.0, 0.5e9] {
                    let d = vm(0.9, kappa);
                    let closed = scf_closed(&d, f, delta, 0.4, &ArrayConfig { beta_r: 0.4, ..cfg }).unwrap();
                    let num = scf_numeric(&ArrayConfig { beta_r: 0.4, ..cfg }, &single(d), f, 0.0, delta).unwrap();
                    assert!((closed - num).norm() <= 1e-8 * num.norm().max(1e-3), "{kappa} {delta} {f}");
                }
            }
        }
    }

    #[test]
    fn branch_choice_is_irrelevant() {
        for w in [Complex64::new(3.0, 4.0), Complex64::new(-2.0, 7.0), Complex64::new(0.1, -45.0)] {
            let a = bessel_i(0, w).unwrap();
            let b = bessel_i(0, -w).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn path_fcf_properties() {
        let d = VonMises::uniform();
        assert_eq!(path_fcf_closed(&d, 0.0, 0.0, 1e9).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(path_fcf_closed(&d, 3.0, 0.0, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        // x = 1.5211440576687651 solves J0(x) = 1/2
        let x = 1.521_144_057_668_765_1;
        let delta = 1.0;
        let nu = x * SPEED_OF_LIGHT / (TAU * delta);
        assert!((path_fcf_closed(&d, delta, 0.0, nu).unwrap().norm() - 0.5).abs() < 1e-12);
        // only the product δ·ν matters
        let d5 = vm(1.0, 5.0);
        let a = path_fcf_closed(&d5, 2.0, 0.3, 1e7).unwrap();
        let b = path_fcf_closed(&d5, 0.5, 0.3, 4e7).unwrap();
        assert!((a - b).norm() < 1e-14);
        // decreasing up to the first zero of J0
        let mut prev = 1.0;
        for i in 1..=240 {
            let x = 2.4048 * i as f64 / 240.0;
            let v = path_fcf_closed(&d, 1.0, 0.0, x * SPEED_OF_LIGHT / TAU).unwrap().norm();
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn fcf_examples() {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.0);
        let paths = vec![
            EllipsePath::new(5e-9, 0.6, vm(1.0, 2.0), 10),
            EllipsePath::new(25e-9, 0.8, vm(3.0, 0.0), 10),
        ];
        assert!((fcf(&cfg, &paths, AntennaIndex::rx(7), AntennaIndex::tx(1), 0.0).unwrap() - 1.0).norm() < 1e-14);
        let centre = ArrayConfig::new(F0);
        for nu in [1e6, 3e7, 1e8] {
            let r = fcf(&centre, &paths, AntennaIndex::rx(1), AntennaIndex::tx(1), nu).unwrap();
            assert!((r.norm() - fcf_taps(&paths, nu).norm()).abs() < 1e-15);
        }
        // A100 of the isotropic single path: δ = −24.75 λ₀, so the half-correlation
        // lag is 1.936 GHz / 99 ≈ 19.56 MHz, well inside 39.1 MHz
        let d = VonMises::uniform();
        let one = vec![EllipsePath::new(0.0, 1.0, d, 1)];
        let delta = element_offset(&cfg, AntennaIndex::rx(100)).unwrap();
        let nu_half = 1.521_144_057_668_765_1 * SPEED_OF_LIGHT / (TAU * delta.abs());
        assert!((nu_half - 19.563e6).abs() < 0.01e6, "{nu_half}");
        let before = path_fcf_numeric(&cfg, &one[0], 0.0, delta, nu_half * 0.999).unwrap().norm();
        let after = path_fcf_numeric(&cfg, &one[0], 0.0, delta, nu_half * 1.001).unwrap().norm();
        assert!(before > 0.5 && after < 0.5);
        let at_39 = fcf(&cfg, &one, AntennaIndex::rx(100), AntennaIndex::tx(1), 39.1e6).unwrap().norm();
        assert!(at_39 < 0.5);
    }

    #[test]
    fn tap_fcf() {
        let one = vec![EllipsePath::new(37e-9, 1.0, VonMises::uniform(), 1)];
        assert!((fcf_taps(&one, 12.3e6).norm() - 1.0).abs() < 1e-15);
        let dt = 20e-9;
        let two = vec![
            EllipsePath::new(10e-9, 1.0, VonMises::uniform(), 1),
            EllipsePath::new(10e-9 + dt, 1.0, VonMises::uniform(), 1),
        ];
        assert!(fcf_taps(&two, 1.0 / (2.0 * dt)).norm() < 1e-15);
    }

    #[test]
    fn exponential_taps_fcf() {
        use crate::stochastic::{sample_exponential_delays, SeedSpec};
        let tau_rms = 30e-9;
        let taus = sample_exponential_delays(tau_rms, 10_000, SeedSpec::new(21)).unwrap();
        let paths: Vec<_> = taus.iter().map(|&t| EllipsePath::new(t, 0.01, VonMises::uniform(), 1)).collect();
        for nu in [1e6, 5e6, 1e7, 3e7] {
            let expected = 1.0 / (1.0 + (TAU * nu * tau_rms).powi(2)).sqrt();
            let got = fcf_taps(&paths, nu).norm();
            assert!((got - expected).abs() < 0.02, "{nu}: {got} vs {expected}");
        }
    }

    #[test]
    fn hermitian_symmetry() {
        let cfg = ArrayConfig::new(F0).with_rx(6, lambda() / 2.0, 0.4).with_tx(3, lambda() / 2.0, 1.0).with_motion(30.0, 0.8);
        let paths = vec![
            EllipsePath::new(12e-9, 0.7, vm(1.0, 2.0), 10).with_k(1.6),
            EllipsePath::new(48e-9, 0.7, vm(5.0, 6.0), 10).with_k(3.0),
        ];
        for (dt, f, nu) in [(1e-3, 0.1e9, 20e6), (-2e-3, -0.3e9, 5e6), (0.0, 0.0, -40e6)] {
            let q = CorrelationQuery::new(1, 2).with_partner(3, 5).with_lags(dt, f, nu);
            let swapped = CorrelationQuery {
                p: q.p_prime,
                p_prime: q.p,
                q: q.q_prime,
                q_prime: q.q,
                ..q.with_lags(-dt, f + nu, -nu)
            };
            let a = stfcf(&cfg, &paths, &q).unwrap();
            let b = stfcf(&cfg, &paths, &swapped).unwrap();
            assert!((a - b.conj()).norm() < 1e-12);
            assert!(a.norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn missing_eccentricity_is_reported() {
        let cfg = ArrayConfig::new(F0).with_tx(2, lambda(), 0.0);
        let paths = vec![EllipsePath::new(0.0, 1.0, VonMises::uniform(), 1)];
        let q = CorrelationQuery::new(1, 1).with_partner(2, 1);
        assert!(matches!(stfcf(&cfg, &paths, &q), Err(Error::Config(_))));
    }

    #[test]
    fn grid_shape_is_checked() {
        let axis = Axis::linspace("nu", "Hz", 0.0, 1.0, 3);
        assert!(CorrelationGrid::new(vec![axis.clone()], vec![Complex64::new(1.0, 0.0); 2], CorrelationMethod::ClosedForm).is_err());
        let g = CorrelationGrid::sweep(axis, CorrelationMethod::ClosedForm, |x| Ok(Complex64::new(x, 0.0))).unwrap();
        assert_eq!(g.magnitudes(), vec![0.0, 0.5, 1.0]);
        assert_eq!(g.axes[0].uniform_step(), Some(0.5));
        let _ = PI;
    }
}
