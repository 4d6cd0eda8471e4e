//! Array-variant power delay profile, delay moments and the iso-correlation
//! constant behind the per-antenna coherence bandwidth.
//!
//! Only the receive array is treated as large here: every function that
//! models the drifted PDP rejects configurations with Tx drift.
//!
//! For one path the excess delay at antenna `q` is `−τ_q cos(α − β_R)`, an
//! arcsine-type law with integrable singularities at `±τ_q`. Sampled curves
//! therefore store cell averages, computed from the exact distribution
//! function, and all moments are obtained in the angle variable.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::correlation::{von_mises_characteristic, Axis, CorrelationGrid, CorrelationMethod};
use crate::error::{Error, Result};
use crate::geometry::{offset_delay, AntennaIndex, ArrayConfig, EllipsePath, SPEED_OF_LIGHT};
use crate::math::bessel::{bessel_ratio, inverse_i0, ln_bessel_i0};
use crate::math::quadrature::{integrate, QuadratureSpec};
use crate::math::roots::{first_sign_change, golden_section_min};
use crate::stochastic::{normalized_gains, VonMises};

/// Value of the path-level PDP at one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPdp {
    Density(f64),
    /// `|τ| = |τ_q|`: integrable singularity.
    Singular,
    /// `τ_q = 0`: unit mass at zero excess delay.
    Impulse,
}

/// Path-level PDP of the excess delay `−τ_q cos(α − β)` at delay `tau`.
pub fn path_pdp(d: &VonMises, tau_q: f64, beta_r: f64, tau: f64) -> PathPdp {
    if tau_q == 0.0 {
        return PathPdp::Impulse;
    }
    let s = tau / tau_q;
    if s.abs() > 1.0 {
        return PathPdp::Density(0.0);
    }
    if s.abs() == 1.0 {
        return PathPdp::Singular;
    }
    let a = (-s).acos();
    let density = (d.pdf(beta_r + a) + d.pdf(beta_r - a)) / (tau_q.abs() * (1.0 - s * s).sqrt());
    PathPdp::Density(density)
}

/// Probability mass of `d` on the arc `[center − half, center + half]`.
pub fn von_mises_arc_mass(d: &VonMises, center: f64, half: f64) -> Result<f64> {
    if half <= 0.0 {
        return Ok(0.0);
    }
    if half >= PI {
        return Ok(1.0);
    }
    let spec = QuadratureSpec::gauss_kronrod().with_tolerances(1e-14, 1e-13);
    let mass = integrate(|a| Complex64::new(d.pdf(a), 0.0), center - half, center + half, &spec)?;
    Ok(mass.value.re.clamp(0.0, 1.0))
}

/// Distribution function of the excess delay `−τ_q cos(α − β)`.
pub fn drift_cdf(d: &VonMises, tau_q: f64, beta_r: f64, t: f64) -> Result<f64> {
    if tau_q == 0.0 {
        return Ok(if t >= 0.0 { 1.0 } else { 0.0 });
    }
    let s = -t / tau_q;
    if s >= 1.0 {
        return Ok(if tau_q > 0.0 { 0.0 } else { 1.0 });
    }
    if s <= -1.0 {
        return Ok(if tau_q > 0.0 { 1.0 } else { 0.0 });
    }
    let mass = von_mises_arc_mass(d, beta_r, s.acos())?;
    Ok(if tau_q > 0.0 { mass } else { 1.0 - mass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PdpMethod {
    ClosedForm,
    Transform,
    MonteCarlo,
}

impl PdpMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            PdpMethod::ClosedForm => "closed-form",
            PdpMethod::Transform => "fourier",
            PdpMethod::MonteCarlo => "monte-carlo",
        }
    }
}

/// Sampled PDP. `density[i]` is the average density over the cell around
/// `tau_axis[i]` (see [`cell_edges`]).
#[derive(Debug, Clone, PartialEq)]
pub struct PdpCurve {
    pub tau_axis: Vec<f64>,
    pub density: Vec<f64>,
    pub antenna: AntennaIndex,
    pub method: PdpMethod,
}

impl PdpCurve {
    /// `∫ density dτ` over the cells.
    pub fn total_mass(&self) -> Result<f64> {
        let edges = cell_edges(&self.tau_axis)?;
        Ok(self
            .density
            .iter()
            .zip(edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum())
    }

    /// Mass-weighted cell centres and masses.
    pub fn cells(&self) -> Result<Vec<(f64, f64)>> {
        let edges = cell_edges(&self.tau_axis)?;
        Ok(self
            .tau_axis
            .iter()
            .zip(&self.density)
            .zip(edges.windows(2))
            .map(|((&t, &d), e)| (t, d * (e[1] - e[0])))
            .collect())
    }
}

/// Cell boundaries for a strictly increasing axis: midpoints between samples,
/// with the outer cells extended symmetrically.
pub fn cell_edges(axis: &[f64]) -> Result<Vec<f64>> {
    if axis.len() < 2 {
        return Err(Error::Resolution("a delay axis needs at least two samples".into()));
    }
    if axis.windows(2).any(|w| !(w[1] > w[0])) || axis.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("delay axis must be finite and strictly increasing".into()));
    }
    let n = axis.len();
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(axis[0] - 0.5 * (axis[1] - axis[0]));
    edges.extend(axis.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    edges.push(axis[n - 1] + 0.5 * (axis[n - 1] - axis[n - 2]));
    Ok(edges)
}

fn reject_tx_drift(cfg: &ArrayConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.has_tx_drift() {
        return Err(Error::Config(
            "delay profiles and moments model receive-side drift only; the Tx array must be a single element or zero spacing".into(),
        ));
    }
    Ok(())
}

/// Composite PDP `Σ c² S_ℓ(τ − τ₀,ℓ)` at antenna `q` as cell averages on `tau_axis`.
pub fn composite_pdp(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex, tau_axis: &[f64]) -> Result<PdpCurve> {
    reject_tx_drift(cfg)?;
    let gains = normalized_gains(paths)?;
    let tau_q = offset_delay(cfg, q)?;
    let edges = cell_edges(tau_axis)?;
    let mut mass = vec![0.0; tau_axis.len()];
    for (path, c) in paths.iter().zip(gains) {
        let w = c * c;
        let lo = path.tau0 - tau_q.abs();
        let hi = path.tau0 + tau_q.abs();
        let mut prev = drift_cdf(&path.aoa, tau_q, cfg.beta_r, edges[0] - path.tau0)?;
        for (i, e) in edges[1..].iter().enumerate() {
            let cur = if *e < lo {
                0.0
            } else if *e > hi {
                1.0
            } else {
                drift_cdf(&path.aoa, tau_q, cfg.beta_r, e - path.tau0)?
            };
            mass[i] += w * (cur - prev);
            prev = cur;
        }
    }
    let density = mass
        .iter()
        .zip(edges.windows(2))
        .map(|(m, e)| (m / (e[1] - e[0])).max(0.0))
        .collect();
    Ok(PdpCurve {
        tau_axis: tau_axis.to_vec(),
        density,
        antenna: q,
        method: PdpMethod::ClosedForm,
    })
}

/// Required grid parameters for [`pdp_from_fcf`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayResolution {
    /// Largest `|τ|` carrying power, s.
    pub max_delay: f64,
    /// Smallest delay feature to resolve, s.
    pub min_feature: f64,
}

/// Inverse Fourier transform of a uniformly sampled FCF into a PDP. Negative
/// ringing is clipped and the result renormalized to unit area.
pub fn pdp_from_fcf(grid: &CorrelationGrid, antenna: AntennaIndex, resolution: DelayResolution) -> Result<PdpCurve> {
    if grid.axes.len() != 1 {
        return Err(Error::Resolution("the FCF grid must have exactly one frequency axis".into()));
    }
    let axis = &grid.axes[0];
    let n = axis.len();
    let step = axis
        .uniform_step()
        .ok_or_else(|| Error::Resolution("the FCF grid must be uniformly sampled in frequency".into()))?;
    let max_step = 1.0 / (2.0 * resolution.max_delay);
    let min_span = 20.0 / resolution.min_feature;
    if step > max_step * (1.0 + 1e-12) || step * (n as f64) < min_span * (1.0 - 1e-12) || n < 16 {
        return Err(Error::Resolution(format!(
            "frequency grid has step {step:e} Hz and span {:e} Hz with {n} points; need step <= {max_step:e} Hz, span >= {min_span:e} Hz and at least 16 points",
            step * n as f64
        )));
    }
    let nu0 = axis.samples[0];
    let mut buffer = grid.values.clone();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buffer);
    let dt = 1.0 / (n as f64 * step);
    let half = n / 2;
    let mut tau_axis = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    for i in 0..n {
        // centred order: m = −n/2 .. n − n/2 − 1
        let m = (i + n - half) % n;
        let signed = i as f64 - half as f64;
        let tau = signed * dt;
        let value = buffer[m] * Complex64::from_polar(step, TAU * nu0 * tau);
        tau_axis.push(tau);
        density.push(value.re.max(0.0));
    }
    let area: f64 = density.iter().sum::<f64>() * dt;
    if !(area > 0.0) {
        return Err(Error::Resolution("transformed profile carries no power".into()));
    }
    density.iter_mut().for_each(|d| *d /= area);
    Ok(PdpCurve {
        tau_axis,
        density,
        antenna,
        method: PdpMethod::Transform,
    })
}

/// Forward transform of a sampled PDP, treating each cell as a point mass at
/// its sample, normalized to 1 at `ν = 0`.
pub fn fcf_from_pdp(curve: &PdpCurve, nu_axis: Axis) -> Result<CorrelationGrid> {
    let cells = curve.cells()?;
    let total: f64 = cells.iter().map(|c| c.1).sum();
    if !(total > 0.0) {
        return Err(Error::Resolution("profile carries no power".into()));
    }
    let method = match curve.method {
        PdpMethod::MonteCarlo => CorrelationMethod::MonteCarlo,
        PdpMethod::ClosedForm | PdpMethod::Transform => CorrelationMethod::ClosedForm,
    };
    CorrelationGrid::sweep(nu_axis, method, |nu| {
        let sum: Complex64 = cells
            .iter()
            .filter(|c| c.1 != 0.0)
            .map(|&(t, m)| m * Complex64::from_polar(1.0, -TAU * nu * t))
            .sum();
        Ok(sum / total)
    })
}

/// Mean delay, delay spread and per-path mean drift at one antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayMoments {
    /// Mean delay, s.
    pub mean: f64,
    /// Root second central moment of the PDP, s.
    pub rms: f64,
    /// `τ_q cos(β − m) I1(κ)/I0(κ)` per path, s.
    pub per_path_mean_drift: Vec<f64>,
    /// Literal sum of per-path square roots with the printed sign on the
    /// angular term; `None` when some term is negative.
    pub literal_rms: Option<f64>,
    /// Number of negative per-path terms in the literal form.
    pub literal_negative_terms: usize,
}

/// Closed-form delay moments at antenna `q`.
pub fn delay_moments(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex) -> Result<DelayMoments> {
    reject_tx_drift(cfg)?;
    let gains = normalized_gains(paths)?;
    let tau_q = offset_delay(cfg, q)?;
    let mut drift = Vec::with_capacity(paths.len());
    let mut cos_sq = Vec::with_capacity(paths.len());
    for path in paths {
        let kappa = path.aoa.kappa();
        let phi = cfg.beta_r - path.aoa.mu();
        let r1 = bessel_ratio(1, kappa)?;
        let r2 = bessel_ratio(2, kappa)?;
        drift.push(tau_q * phi.cos() * r1);
        // E[cos²(α − β)] = cos²φ (1 + I2/I0)/2 + sin²φ (1 − I2/I0)/2
        cos_sq.push(phi.cos().powi(2) * (1.0 + r2) / 2.0 + phi.sin().powi(2) * (1.0 - r2) / 2.0);
    }
    let mean: f64 = paths
        .iter()
        .zip(&gains)
        .zip(&drift)
        .map(|((p, c), d)| c * c * (p.tau0 - d))
        .sum();
    let mut var = 0.0;
    let mut literal = 0.0;
    let mut negative = 0;
    for (((p, c), d), e) in paths.iter().zip(&gains).zip(&drift).zip(&cos_sq) {
        let centred = p.tau0 - mean;
        let base = centred * centred - 2.0 * centred * d;
        var += c * c * (base + tau_q * tau_q * e);
        let term = base - tau_q * tau_q * e;
        if term < 0.0 {
            negative += 1;
        } else {
            literal += c * c * term.sqrt();
        }
    }
    if negative > 0 {
        log::debug!("literal delay-spread form has {negative} negative per-path terms");
    }
    Ok(DelayMoments {
        mean,
        rms: var.max(0.0).sqrt(),
        per_path_mean_drift: drift,
        literal_rms: (negative == 0).then_some(literal),
        literal_negative_terms: negative,
    })
}

/// Mean delay at antenna `q`.
pub fn mean_delay(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex) -> Result<f64> {
    Ok(delay_moments(cfg, paths, q)?.mean)
}

/// RMS delay spread at antenna `q`.
pub fn delay_spread(cfg: &ArrayConfig, paths: &[EllipsePath], q: AntennaIndex) -> Result<f64> {
    Ok(delay_moments(cfg, paths, q)?.rms)
}

/// Array orientation used for the coherence constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orientation {
    /// Orientation giving the smallest constant, i.e. the fastest decorrelation.
    Worst,
    /// Rx array tilt `β_R`, combined with the distribution's mean angle.
    Tilt(f64),
}

/// How [`coherence_constant_detail`] obtained its value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceConstant {
    /// `δ·ν` product at the threshold, Hz·m.
    pub value: f64,
    /// Normalized lag `2πδν/c₀` at the threshold.
    pub x: f64,
    /// `|cos(β_R − m)|` of the orientation used.
    pub cos_orientation: f64,
    /// Whether the inverse-`I0` closed form applied.
    pub closed_form: bool,
}

const SCAN_STEP: f64 = 0.02;
const SCAN_BOUND: f64 = 1e3;

fn crossing(kappa: f64, cos_orientation: f64, rho: f64) -> Result<(f64, bool)> {
    if cos_orientation.abs() < 1e-12 {
        let i0_kappa = ln_bessel_i0(kappa)?.exp();
        if rho * i0_kappa >= 1.0 {
            let w = inverse_i0(rho * i0_kappa)?;
            return Ok(((kappa * kappa - w * w).max(0.0).sqrt(), true));
        }
    }
    // a distribution with the orientation folded into the mean angle
    let d = VonMises::new(cos_orientation.clamp(-1.0, 1.0).acos(), kappa)?;
    let x = first_sign_change(
        |x| Ok(von_mises_characteristic(&d, x, 0.0)?.norm() - rho),
        0.0,
        SCAN_STEP,
        SCAN_BOUND,
        1e-14,
    )
    .map_err(|e| match e {
        Error::Search(_) => Error::Search(format!(
            "|FCF| does not fall to {rho} below normalized lag {SCAN_BOUND} (kappa {kappa})"
        )),
        other => other,
    })?;
    Ok((x, false))
}

/// Iso-correlation constant with its diagnostics.
pub fn coherence_constant_detail(d: &VonMises, rho: f64, orientation: Orientation) -> Result<CoherenceConstant> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("threshold must lie in (0, 1), got {rho}")));
    }
    let kappa = d.kappa();
    let (c, (x, closed)) = match orientation {
        Orientation::Tilt(beta_r) => {
            let c = (beta_r - d.mu()).cos().abs();
            (c, crossing(kappa, c, rho)?)
        }
        Orientation::Worst if kappa == 0.0 => (0.0, crossing(0.0, 0.0, rho)?),
        Orientation::Worst => {
            // orientations that never reach `rho` within the scan cannot be the worst
            let lag = |c: f64| match crossing(kappa, c, rho) {
                Ok(r) => Ok(r.0),
                Err(Error::Search(_)) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            };
            let grid: Vec<(f64, f64)> = (0..=16)
                .map(|i| {
                    let c = i as f64 / 16.0;
                    lag(c).map(|x| (c, x))
                })
                .collect::<Result<_>>()?;
            let best = grid
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            if grid[best].1.is_infinite() {
                return Err(Error::Search(format!(
                    "|FCF| does not fall to {rho} below normalized lag {SCAN_BOUND} for any orientation (kappa {kappa})"
                )));
            }
            let lo = grid[best.saturating_sub(1)].0;
            let hi = grid[(best + 1).min(16)].0;
            let (c_min, x_min) = golden_section_min(lag, lo, hi, 1e-9)?;
            let (c, x) = [(grid[best].0, grid[best].1), (c_min, x_min)]
                .into_iter()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((c_min, x_min));
            (c, crossing(kappa, c, rho).map(|r| (x, r.1))?)
        }
    };
    Ok(CoherenceConstant {
        value: SPEED_OF_LIGHT * x / TAU,
        x,
        cos_orientation: c,
        closed_form: closed,
    })
}

/// Product `δ_q·ν` (Hz·m) at which the path-level FCF magnitude first
/// falls to `rho`.
pub fn coherence_constant(d: &VonMises, rho: f64, orientation: Orientation) -> Result<f64> {
    Ok(coherence_constant_detail(d, rho, orientation)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Finite(f64),
    /// Antenna at the focus: the path-level FCF never decorrelates.
    Unbounded,
}

/// Single-path coherence bandwidth `C/|δ_q|` at an element offset `delta_q`.
pub fn coherence_bandwidth(d: &VonMises, rho: f64, delta_q: f64, orientation: Orientation) -> Result<Bandwidth> {
    let c = coherence_constant(d, rho, orientation)?;
    if delta_q == 0.0 {
        return Ok(Bandwidth::Unbounded);
    }
    Ok(Bandwidth::Finite(c / delta_q.abs()))
}
