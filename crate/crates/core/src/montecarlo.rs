//! Brute-force estimators built on finite scatterer realizations.
//!
//! Every realization redraws AOAs and phases. Work is split by realization
//! with rayon; per-realization results are collected in order and reduced by
//! pairwise summation, so estimates are bitwise reproducible for a given seed
//! regardless of the thread count.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlation::{Axis, CorrelationGrid, CorrelationMethod, CorrelationQuery};
use crate::delay_stats::{cell_edges, PdpCurve, PdpMethod};
use crate::error::{Error, Result};
use crate::geometry::{offset_delay, AntennaIndex, ArrayConfig, EllipsePath, Side};
use crate::stochastic::{generate_realization, PathRealization, ScattererRealization, SeedSpec};

const TAG_REALIZATION: u64 = 7;

/// Transfer function of every antenna pair at one `(t, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunctionSample {
    pub t: f64,
    pub f: f64,
    pub m_t: usize,
    pub m_r: usize,
    /// `H_qp` at `values[(q − 1)·m_t + (p − 1)]`.
    pub values: Vec<Complex64>,
}

impl TransferFunctionSample {
    pub fn get(&self, p: usize, q: usize) -> Option<Complex64> {
        if p == 0 || q == 0 || p > self.m_t || q > self.m_r {
            return None;
        }
        Some(self.values[(q - 1) * self.m_t + (p - 1)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub n_realizations: usize,
    /// Replaces every path's scatterer count when set.
    pub n_scatterers_override: Option<usize>,
    pub seed: SeedSpec,
}

impl EstimatorConfig {
    pub fn new(n_realizations: usize, seed: SeedSpec) -> Self {
        Self {
            n_realizations,
            n_scatterers_override: None,
            seed,
        }
    }

    pub fn with_scatterers(mut self, n: usize) -> Self {
        self.n_scatterers_override = Some(n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_realizations < 1 {
            return Err(Error::Config("at least one realization is required".into()));
        }
        if self.n_scatterers_override == Some(0) {
            return Err(Error::Config("scatterer override must be positive".into()));
        }
        Ok(())
    }

    fn paths(&self, paths: &[EllipsePath]) -> Vec<EllipsePath> {
        let mut out = paths.to_vec();
        if let Some(n) = self.n_scatterers_override {
            out.iter_mut().for_each(|p| p.n_scatterers = n);
        }
        out
    }

    fn realization_seed(&self, r: usize) -> SeedSpec {
        self.seed.derive(TAG_REALIZATION).derive(r as u64)
    }
}

/// Complex sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// `sqrt(Var[Re] + Var[Im]) / √R` from the per-realization spread.
    pub std_error: f64,
    pub n_realizations: usize,
}

impl Estimate {
    fn from_samples(samples: &[Complex64]) -> Self {
        let n = samples.len();
        let mean = pairwise_sum(samples) / n as f64;
        let spread: Vec<f64> = samples.iter().map(|s| (s - mean).norm_sqr()).collect();
        let var = if n > 1 { pairwise_sum(&spread) / (n - 1) as f64 } else { 0.0 };
        Estimate {
            value: mean,
            std_error: (var / n as f64).sqrt(),
            n_realizations: n,
        }
    }

    /// `|value − reference|` in standard errors.
    pub fn z_score(&self, reference: Complex64) -> f64 {
        (self.value - reference).norm() / self.std_error
    }
}

/// Pairwise summation in slice order.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + Default + std::ops::Add<Output = T>,
{
    match values.len() {
        0 => T::default(),
        1 => values[0],
        n if n <= 8 => values.iter().fold(T::default(), |a, &b| a + b),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

fn sum_columns(rows: &[Vec<f64>]) -> Vec<f64> {
    match rows.len() {
        0 => Vec::new(),
        1 => rows[0].clone(),
        n => {
            let (lo, hi) = rows.split_at(n / 2);
            let mut a = sum_columns(lo);
            a.iter_mut().zip(sum_columns(hi)).for_each(|(x, y)| *x += y);
            a
        }
    }
}

fn sum_columns_complex(rows: &[Vec<Complex64>]) -> Vec<Complex64> {
    match rows.len() {
        0 => Vec::new(),
        1 => rows[0].clone(),
        n => {
            let (lo, hi) = rows.split_at(n / 2);
            let mut a = sum_columns_complex(lo);
            a.iter_mut().zip(sum_columns_complex(hi)).for_each(|(x, y)| *x += y);
            a
        }
    }
}

fn pair(cfg: &ArrayConfig, p: AntennaIndex, q: AntennaIndex) -> Result<(f64, f64)> {
    if p.side != Side::Tx || q.side != Side::Rx {
        return Err(Error::Domain(format!("expected a (Tx, Rx) antenna pair, got {p:?}, {q:?}")));
    }
    Ok((offset_delay(cfg, p)?, offset_delay(cfg, q)?))
}

fn aod(path: &PathRealization, n: usize, tau_p: f64) -> Result<f64> {
    match &path.aod {
        Some(v) => Ok(v[n]),
        None if tau_p == 0.0 => Ok(0.0),
        None => Err(Error::Config("realization has no AODs but the Tx element is off-centre".into())),
    }
}

/// `H_qp(t, f)` with the phase `e^{−j2πfτ_qp}` of the first-order delay.
pub fn transfer_function(
    cfg: &ArrayConfig,
    realization: &ScattererRealization,
    p: AntennaIndex,
    q: AntennaIndex,
    t: f64,
    f: f64,
) -> Result<Complex64> {
    let (tau_p, tau_q) = pair(cfg, p, q)?;
    let k0 = TAU * cfg.f0;
    let mut total = Complex64::new(0.0, 0.0);
    for path in &realization.paths {
        let n_s = path.aoa.len();
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..n_s {
            let ct = (aod(path, n, tau_p)? - cfg.beta_t).cos();
            let cr = (path.aoa[n] - cfg.beta_r).cos();
            // a_p b_q = e^{jk(δ_p cos + δ_q cos)} with kδ = 2πf₀τ
            let steering = k0 * (tau_p * ct + tau_q * cr);
            let delay = path.tau0 - tau_p * ct - tau_q * cr;
            sum += Complex64::from_polar(1.0, steering + TAU * path.doppler[n] * t + path.phase[n] - TAU * f * delay);
        }
        total += path.gain / (n_s as f64).sqrt() * sum;
    }
    Ok(total)
}

/// `H_qp(t, f)` written as `(a_p b_q)^{1 + f/f₀} e^{−j2πfτ₀}`.
pub fn transfer_function_exponent_form(
    cfg: &ArrayConfig,
    realization: &ScattererRealization,
    p: AntennaIndex,
    q: AntennaIndex,
    t: f64,
    f: f64,
) -> Result<Complex64> {
    let (tau_p, tau_q) = pair(cfg, p, q)?;
    let k = cfg.wavenumber();
    let delta_p = tau_p * crate::geometry::SPEED_OF_LIGHT;
    let delta_q = tau_q * crate::geometry::SPEED_OF_LIGHT;
    let exponent = 1.0 + f / cfg.f0;
    let mut total = Complex64::new(0.0, 0.0);
    for path in &realization.paths {
        let n_s = path.aoa.len();
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..n_s {
            let ab_phase = k * delta_p * (aod(path, n, tau_p)? - cfg.beta_t).cos() + k * delta_q * (path.aoa[n] - cfg.beta_r).cos();
            sum += Complex64::from_polar(1.0, exponent * ab_phase + TAU * path.doppler[n] * t + path.phase[n]);
        }
        total += path.gain / (n_s as f64).sqrt() * sum * Complex64::from_polar(1.0, -TAU * f * path.tau0);
    }
    Ok(total)
}

/// Transfer function of every antenna pair.
pub fn transfer_function_sample(cfg: &ArrayConfig, realization: &ScattererRealization, t: f64, f: f64) -> Result<TransferFunctionSample> {
    let mut values = Vec::with_capacity(cfg.m_t * cfg.m_r);
    for q in 1..=cfg.m_r {
        for p in 1..=cfg.m_t {
            values.push(transfer_function(cfg, realization, AntennaIndex::tx(p), AntennaIndex::rx(q), t, f)?);
        }
    }
    Ok(TransferFunctionSample {
        t,
        f,
        m_t: cfg.m_t,
        m_r: cfg.m_r,
        values,
    })
}

fn realizations<T, F>(cfg: &ArrayConfig, paths: &[EllipsePath], est: &EstimatorConfig, per: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&ScattererRealization) -> Result<T> + Sync,
{
    est.validate()?;
    let paths = est.paths(paths);
    (0..est.n_realizations)
        .into_par_iter()
        .map(|r| per(&generate_realization(cfg, &paths, est.realization_seed(r))?))
        .collect()
}

/// Sample mean of `H*_qp(0, f)·H_q'p'(Δt, f + ν)` over realizations.
pub fn estimate_stfcf(cfg: &ArrayConfig, paths: &[EllipsePath], query: &CorrelationQuery, est: &EstimatorConfig) -> Result<Estimate> {
    let samples = realizations(cfg, paths, est, |real| {
        let h = transfer_function(cfg, real, query.p, query.q, 0.0, query.f)?;
        let h2 = transfer_function(cfg, real, query.p_prime, query.q_prime, query.delta_t, query.f + query.nu)?;
        Ok(h.conj() * h2)
    })?;
    Ok(Estimate::from_samples(&samples))
}

fn reject_tx_drift(cfg: &ArrayConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.has_tx_drift() {
        return Err(Error::Config("empirical delay profiles model receive-side drift only".into()));
    }
    Ok(())
}

/// Power-weighted delay samples `(τ, c²/N)` of one realization at Rx antenna `q`.
fn weighted_delays(realization: &ScattererRealization, tau_q: f64, beta_r: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    realization.paths.iter().flat_map(move |path| {
        let w = path.gain * path.gain / path.aoa.len() as f64;
        path.aoa.iter().map(move |a| (path.tau0 - tau_q * (a - beta_r).cos(), w))
    })
}

/// Histogram bins for [`empirical_pdp`].
#[derive(Debug, Clone, PartialEq)]
pub enum Bins {
    /// This many bins over the drift support with 5% margins on each side.
    Auto(usize),
    /// Explicit bin centres.
    Centers(Vec<f64>),
}

impl Default for Bins {
    fn default() -> Self {
        Bins::Auto(512)
    }
}

/// Bin centres over `[min τ₀ − |τ_q|, max τ₀ + |τ_q|]` widened by 5% per side.
pub fn auto_bins(paths: &[EllipsePath], tau_q: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || paths.is_empty() {
        return Err(Error::Resolution("auto bins need at least two bins and one path".into()));
    }
    let lo = paths.iter().map(|p| p.tau0).fold(f64::INFINITY, f64::min) - tau_q.abs();
    let hi = paths.iter().map(|p| p.tau0).fold(f64::NEG_INFINITY, f64::max) + tau_q.abs();
    let mut width = hi - lo;
    if width <= 0.0 {
        width = if lo != 0.0 { 0.1 * lo.abs() } else { 1e-9 };
    }
    let (lo, hi) = (lo - 0.05 * width, lo + 1.05 * width);
    let step = (hi - lo) / n as f64;
    Ok((0..n).map(|i| lo + (i as f64 + 0.5) * step).collect())
}

/// Empirical PDP with a per-bin standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct PdpEstimate {
    pub curve: PdpCurve,
    pub std_error: Vec<f64>,
}

/// Power-weighted histogram of the drifted delays at Rx antenna `q`,
/// normalized to unit area.
pub fn empirical_pdp(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex, bins: &Bins, est: &EstimatorConfig) -> Result<PdpEstimate> {
    reject_tx_drift(cfg)?;
    let tau_q = offset_delay(cfg, q)?;
    let centers = match bins {
        Bins::Auto(n) => auto_bins(paths, tau_q, *n)?,
        Bins::Centers(c) => c.clone(),
    };
    let edges = cell_edges(&centers)?;
    let widths: Vec<f64> = edges.windows(2).map(|e| e[1] - e[0]).collect();
    let beta_r = cfg.beta_r;
    let rows = realizations(cfg, paths, est, |real| {
        let mut mass = vec![0.0; centers.len()];
        for (tau, w) in weighted_delays(real, tau_q, beta_r) {
            let i = edges.partition_point(|&e| e <= tau);
            if i == 0 || i > centers.len() || (i == centers.len() && tau > edges[centers.len()]) {
                return Err(Error::Coverage(format!(
                    "delay {tau:e} s lies outside the bins [{:e}, {:e}] s",
                    edges[0],
                    edges[centers.len()]
                )));
            }
            mass[i - 1] += w;
        }
        let total: f64 = pairwise_sum(&mass);
        Ok(mass.iter().zip(&widths).map(|(m, w)| m / total / w).collect::<Vec<f64>>())
    })?;
    let r = rows.len() as f64;
    let density: Vec<f64> = sum_columns(&rows).into_iter().map(|s| s / r).collect();
    let squares: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().zip(&density).map(|(x, m)| (x - m) * (x - m)).collect())
        .collect();
    let std_error = if rows.len() > 1 {
        sum_columns(&squares).into_iter().map(|s| (s / (r - 1.0) / r).sqrt()).collect()
    } else {
        vec![0.0; centers.len()]
    };
    Ok(PdpEstimate {
        curve: PdpCurve {
            tau_axis: centers,
            density,
            antenna: q,
            method: PdpMethod::MonteCarlo,
        },
        std_error,
    })
}

/// Empirical FCF with per-point standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct FcfEstimate {
    pub grid: CorrelationGrid,
    pub std_error: Vec<f64>,
}

/// Fourier transform of the power-weighted delay samples at Rx antenna `q`
/// (the unbinned empirical PDP), normalized to 1 at `ν = 0`.
pub fn empirical_fcf(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex, nu_axis: Axis, est: &EstimatorConfig) -> Result<FcfEstimate> {
    reject_tx_drift(cfg)?;
    let step = match nu_axis.len() {
        0 => return Err(Error::Resolution("empty frequency grid".into())),
        1 => 0.0,
        _ => nu_axis
            .uniform_step()
            .ok_or_else(|| Error::Resolution("the empirical FCF needs a uniform frequency grid".into()))?,
    };
    let tau_q = offset_delay(cfg, q)?;
    let nu0 = nu_axis.samples[0];
    let n = nu_axis.len();
    let beta_r = cfg.beta_r;
    let rows = realizations(cfg, paths, est, |real| {
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        let mut total = 0.0;
        for (tau, w) in weighted_delays(real, tau_q, beta_r) {
            total += w;
            let rot = Complex64::from_polar(1.0, -TAU * step * tau);
            let mut z = Complex64::from_polar(w, -TAU * nu0 * tau);
            for a in acc.iter_mut() {
                *a += z;
                z *= rot;
            }
        }
        acc.iter_mut().for_each(|a| *a /= total);
        Ok(acc)
    })?;
    let r = rows.len() as f64;
    let mean: Vec<Complex64> = sum_columns_complex(&rows).into_iter().map(|s| s / r).collect();
    let squares: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().zip(&mean).map(|(x, m)| (x - m).norm_sqr()).collect())
        .collect();
    let std_error = if rows.len() > 1 {
        sum_columns(&squares).into_iter().map(|s| (s / (r - 1.0) / r).sqrt()).collect()
    } else {
        vec![0.0; n]
    };
    let mut grid = CorrelationGrid::new(vec![nu_axis], mean, CorrelationMethod::MonteCarlo)?;
    grid.seed = Some(est.seed.master_seed);
    Ok(FcfEstimate { grid, std_error })
}

/// Empirical mean delay and RMS delay spread at Rx antenna `q`, each
/// averaged over realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    pub mean_std_error: f64,
    pub rms: f64,
    pub rms_std_error: f64,
}

pub fn empirical_delay_moments(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex, est: &EstimatorConfig) -> Result<MomentEstimate> {
    reject_tx_drift(cfg)?;
    let tau_q = offset_delay(cfg, q)?;
    let beta_r = cfg.beta_r;
    let rows = realizations(cfg, paths, est, |real| {
        let (mut s0, mut s1) = (0.0, 0.0);
        for (tau, w) in weighted_delays(real, tau_q, beta_r) {
            s0 += w;
            s1 += w * tau;
        }
        let mean = s1 / s0;
        let var: f64 = weighted_delays(real, tau_q, beta_r).map(|(t, w)| w * (t - mean) * (t - mean)).sum::<f64>() / s0;
        Ok(vec![mean, var.sqrt()])
    })?;
    let r = rows.len() as f64;
    let mean: Vec<f64> = sum_columns(&rows).into_iter().map(|s| s / r).collect();
    let squares: Vec<Vec<f64>> = rows
        .iter()
        .map(|row| row.iter().zip(&mean).map(|(x, m)| (x - m) * (x - m)).collect())
        .collect();
    let se: Vec<f64> = if rows.len() > 1 {
        sum_columns(&squares).into_iter().map(|s| (s / (r - 1.0) / r).sqrt()).collect()
    } else {
        vec![0.0, 0.0]
    };
    Ok(MomentEstimate {
        mean: mean[0],
        mean_std_error: se[0],
        rms: mean[1],
        rms_std_error: se[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{fcf, stfcf};
    use crate::delay_stats::composite_pdp;
    use crate::geometry::SPEED_OF_LIGHT;
    use crate::stochastic::VonMises;

    const F0: f64 = 2e9;

    fn lambda() -> f64 {
        SPEED_OF_LIGHT / F0
    }

    fn vm(mu: f64, kappa: f64) -> VonMises {
        VonMises::new(mu, kappa).unwrap()
    }

    #[test]
    fn single_scatterer_at_the_centre() {
        let cfg = ArrayConfig::new(F0);
        let paths = vec![EllipsePath::new(50e-9, 1.0, vm(1.0, 2.0), 1)];
        let real = generate_realization(&cfg, &paths, SeedSpec::new(3)).unwrap();
        let h = transfer_function(&cfg, &real, AntennaIndex::tx(1), AntennaIndex::rx(1), 0.0, 0.0).unwrap();
        let expected = Complex64::from_polar(1.0, real.paths[0].phase[0]);
        assert!((h - expected).norm() < 1e-15);
    }

    #[test]
    fn both_forms_agree() {
        let cfg = ArrayConfig::new(F0)
            .with_rx(64, lambda() / 2.0, 0.4)
            .with_tx(8, lambda() / 2.0, 1.1)
            .with_motion(30.0, 0.3);
        let paths = vec![
            EllipsePath::new(80e-9, 0.8, vm(1.0, 2.0), 20).with_k(1.3),
            EllipsePath::new(140e-9, 0.6, vm(4.0, 0.0), 20).with_k(2.0),
        ];
        let real = generate_realization(&cfg, &paths, SeedSpec::new(11)).unwrap();
        let mut rng = SeedSpec::new(12).rng();
        use rand::Rng;
        for _ in 0..50 {
            let p = AntennaIndex::tx(rng.random_range(1..=8));
            let q = AntennaIndex::rx(rng.random_range(1..=64));
            let t = rng.random_range(0.0..1e-2);
            let f = rng.random_range(-2e8..2e8);
            let a = transfer_function(&cfg, &real, p, q, t, f).unwrap();
            let b = transfer_function_exponent_form(&cfg, &real, p, q, t, f).unwrap();
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{a} {b}");
        }
        let sample = transfer_function_sample(&cfg, &real, 0.0, 0.0).unwrap();
        assert_eq!(sample.values.len(), 64 * 8);
        assert_eq!(
            sample.get(3, 5),
            Some(transfer_function(&cfg, &real, AntennaIndex::tx(3), AntennaIndex::rx(5), 0.0, 0.0).unwrap())
        );
        assert!(sample.get(9, 1).is_none());
    }

    #[test]
    fn power_is_normalized() {
        let cfg = ArrayConfig::new(F0).with_rx(16, lambda() / 2.0, 0.0);
        let paths = vec![
            EllipsePath::new(10e-9, 0.8, vm(1.0, 2.0), 25),
            EllipsePath::new(20e-9, 0.6, vm(3.0, 7.0), 25),
        ];
        let est = EstimatorConfig::new(1000, SeedSpec::new(5));
        let q = CorrelationQuery::new(1, 16);
        let e = estimate_stfcf(&cfg, &paths, &q, &est).unwrap();
        assert!(e.z_score(Complex64::new(1.0, 0.0)) < 3.0, "{e:?}");
        assert!(e.value.im.abs() < 1e-12);
    }

    #[test]
    fn matches_quadrature_stfcf() {
        let cfg = ArrayConfig::new(F0).with_rx(32, lambda() / 2.0, 0.2).with_motion(20.0, 1.0);
        let paths = vec![EllipsePath::new(30e-9, 1.0, vm(1.0, 3.0), 100)];
        let est = EstimatorConfig::new(1000, SeedSpec::new(8));
        let spots = [
            CorrelationQuery::new(1, 1).with_partner(1, 2).with_lags(0.0, 0.0, 0.0),
            CorrelationQuery::new(1, 1).with_partner(1, 3).with_lags(1e-3, 1e8, 0.0),
            CorrelationQuery::new(1, 4).with_partner(1, 4).with_lags(0.0, 0.0, 5e7),
            CorrelationQuery::new(1, 32).with_partner(1, 30).with_lags(2e-3, -2e8, 2e7),
            CorrelationQuery::new(1, 16).with_partner(1, 17).with_lags(0.0, 5e8, 0.0),
        ];
        for q in &spots {
            let e = estimate_stfcf(&cfg, &paths, q, &est).unwrap();
            let exact = stfcf(&cfg, &paths, q).unwrap();
            assert!(e.z_score(exact) < 3.0, "{q:?}: {e:?} vs {exact}");
        }
    }

    #[test]
    fn standard_error_scales() {
        let cfg = ArrayConfig::new(F0).with_rx(8, lambda() / 2.0, 0.0);
        let paths = vec![EllipsePath::new(30e-9, 1.0, vm(0.0, 1.0), 50)];
        let q = CorrelationQuery::new(1, 1).with_partner(1, 8);
        let a = estimate_stfcf(&cfg, &paths, &q, &EstimatorConfig::new(500, SeedSpec::new(1))).unwrap();
        let b = estimate_stfcf(&cfg, &paths, &q, &EstimatorConfig::new(2000, SeedSpec::new(1))).unwrap();
        let ratio = a.std_error / b.std_error;
        assert!((ratio - 2.0).abs() < 0.4, "{ratio}");
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = ArrayConfig::new(F0).with_rx(8, lambda() / 2.0, 0.0);
        let paths = vec![EllipsePath::new(30e-9, 1.0, vm(0.0, 1.0), 50)];
        let q = CorrelationQuery::new(1, 1).with_partner(1, 8).with_lags(0.0, 0.0, 1e7);
        let est = EstimatorConfig::new(300, SeedSpec::new(9));
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_stfcf(&cfg, &paths, &q, &est).unwrap())
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.value.re.to_bits(), four.value.re.to_bits());
        assert_eq!(one.value.im.to_bits(), four.value.im.to_bits());
        assert_eq!(one.std_error.to_bits(), four.std_error.to_bits());
    }

    #[test]
    fn single_path_histogram() {
        let cfg = ArrayConfig::new(F0).with_rx(101, lambda() / 2.0, 0.0);
        let paths = vec![EllipsePath::new(40e-9, 1.0, vm(0.0, 0.0), 100)];
        let est = EstimatorConfig::new(10, SeedSpec::new(2));
        let pdp = empirical_pdp(&cfg, &paths, AntennaIndex::rx(51), &Bins::Auto(64), &est).unwrap();
        let nonzero: Vec<usize> = (0..64).filter(|&i| pdp.curve.density[i] > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        let edges = cell_edges(&pdp.curve.tau_axis).unwrap();
        let i = nonzero[0];
        assert!(edges[i] <= 40e-9 && 40e-9 < edges[i + 1]);
        assert!((pdp.curve.total_mass().unwrap() - 1.0).abs() < 1e-12);

        let narrow: Vec<f64> = (0..10).map(|i| 39e-9 + i as f64 * 1e-12).collect();
        assert!(matches!(
            empirical_pdp(&cfg, &paths, AntennaIndex::rx(1), &Bins::Centers(narrow), &est),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn histogram_matches_closed_form() {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.0);
        let paths = vec![
            EllipsePath::new(20e-9, 0.6, vm(1.0, 3.0), 100),
            EllipsePath::new(35e-9, 0.8, vm(4.0, 0.5), 100),
        ];
        let est = EstimatorConfig::new(1000, SeedSpec::new(4));
        let q = AntennaIndex::rx(100);
        let pdp = empirical_pdp(&cfg, &paths, q, &Bins::Auto(64), &est).unwrap();
        let exact = composite_pdp(&cfg, &paths, q, &pdp.curve.tau_axis).unwrap();
        let edges = cell_edges(&pdp.curve.tau_axis).unwrap();
        let mut l1 = 0.0;
        for i in 0..64 {
            let w = edges[i + 1] - edges[i];
            l1 += (pdp.curve.density[i] - exact.density[i]).abs() * w;
            if pdp.std_error[i] > 0.0 {
                let z = (pdp.curve.density[i] - exact.density[i]).abs() / pdp.std_error[i];
                assert!(z < 4.5, "bin {i}: z = {z}");
            }
        }
        assert!(l1 < 0.02, "{l1}");
    }

    #[test]
    fn empirical_fcf_matches_closed_form() {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.3);
        let paths = vec![
            EllipsePath::new(20e-9, 0.6, vm(1.0, 3.0), 100),
            EllipsePath::new(35e-9, 0.8, vm(4.0, 0.5), 100),
        ];
        let est = EstimatorConfig::new(500, SeedSpec::new(6));
        let q = AntennaIndex::rx(100);
        let nu = Axis::linspace("nu", "Hz", -50e6, 50e6, 21);
        let e = empirical_fcf(&cfg, &paths, q, nu.clone(), &est).unwrap();
        for (i, &v) in nu.samples.iter().enumerate() {
            let exact = fcf(&cfg, &paths, q, AntennaIndex::tx(1), v).unwrap();
            let z = (e.grid.values[i] - exact).norm() / e.std_error[i].max(1e-300);
            if v == 0.0 {
                assert!((e.grid.values[i] - 1.0).norm() < 1e-12);
            } else {
                assert!(z < 3.5, "nu {v}: z {z}");
            }
        }
    }

    #[test]
    fn moments_match_closed_form() {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.3);
        let paths = vec![
            EllipsePath::new(20e-9, 0.6, vm(1.0, 3.0), 100),
            EllipsePath::new(35e-9, 0.8, vm(4.0, 0.5), 100),
        ];
        let q = AntennaIndex::rx(90);
        let m = empirical_delay_moments(&cfg, &paths, q, &EstimatorConfig::new(400, SeedSpec::new(10))).unwrap();
        let exact = crate::delay_stats::delay_moments(&cfg, &paths, q).unwrap();
        assert!((m.mean - exact.mean).abs() < 3.5 * m.mean_std_error, "{m:?} {exact:?}");
        // per-realization spreads are biased low by O(1/N); compare loosely
        assert!((m.rms - exact.rms).abs() < 0.02 * exact.rms, "{m:?} {exact:?}");
    }
}
