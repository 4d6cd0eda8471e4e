//! Random ingredients: von Mises AOAs, uniform phases, exponential path
//! delays and complete scatterer realizations.
//!
//! All randomness flows from a [`SeedSpec`]. Each `(master_seed, stream_id)`
//! pair selects a ChaCha20 stream (`ChaCha20Rng::seed_from_u64(master_seed)`
//! followed by `set_stream(stream_id)`), so realizations are reproducible
//! across platforms. Sub-streams for individual paths and purposes are split
//! off with [`SeedSpec::derive`].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::geometry::{aoa_to_aod, normalize_angle, ArrayConfig, EllipsePath};
use crate::math::bessel::{bessel_i_scaled, MAX_ARGUMENT};

/// Von Mises angular distribution with mean `mu` and concentration `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    // 1 / (2π e^{-κ} I0(κ))
    norm: f64,
}

impl VonMises {
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain(format!("mean angle must be finite, got {mu}")));
        }
        if !(kappa >= 0.0) || kappa > MAX_ARGUMENT {
            return Err(Error::Domain(format!(
                "concentration must lie in [0, {MAX_ARGUMENT}], got {kappa}"
            )));
        }
        let i0_scaled = bessel_i_scaled(0, Complex64::new(kappa, 0.0))?.re;
        Ok(Self {
            mu: normalize_angle(mu),
            kappa,
            norm: 1.0 / (TAU * i0_scaled),
        })
    }

    /// Isotropic scattering, `κ = 0`.
    pub fn uniform() -> Self {
        Self {
            mu: TAU,
            kappa: 0.0,
            norm: 1.0 / TAU,
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.norm * (self.kappa * ((x - self.mu).cos() - 1.0)).exp()
    }

    /// Best–Fisher wrapped-Cauchy rejection sampler.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.kappa == 0.0 {
            return uniform_angle(rng);
        }
        let k = self.kappa;
        let s = (1.0 + 4.0 * k * k).sqrt();
        let tau = 1.0 + s;
        // (τ − √(2τ)) / (2κ) rearranged to avoid cancellation at small κ
        let rho = tau * 2.0 * k / ((s + 1.0) * (tau + (2.0 * tau).sqrt()));
        let r = (1.0 + rho * rho) / (2.0 * rho);
        loop {
            let u1: f64 = rng.random();
            let u2: f64 = rng.random();
            let z = (PI * u1).cos();
            let f = (1.0 + r * z) / (r + z);
            let c = k * (r - f);
            if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
                let u3: f64 = rng.random();
                let theta = if u3 < 0.5 { -f.clamp(-1.0, 1.0).acos() } else { f.clamp(-1.0, 1.0).acos() };
                return normalize_angle(self.mu + theta);
            }
        }
    }
}

/// Von Mises density `e^{κ cos(x−μ)} / (2π I0(κ))`.
pub fn von_mises_pdf(d: &VonMises, x: f64) -> f64 {
    d.pdf(x)
}

/// Seed of one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            stream_id: 0,
        }
    }

    /// Sub-stream identified by `tag`, distinct from the parent and from
    /// every other tag.
    pub fn derive(&self, tag: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(tag.wrapping_add(1))),
        }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

// stream tags
const TAG_AOA: u64 = 1;
const TAG_PHASE: u64 = 2;
const TAG_DELAY: u64 = 3;
const TAG_KAPPA: u64 = 4;
const TAG_MEAN: u64 = 5;
const TAG_PATHS: u64 = 6;

/// Uniform angle on `(0, 2π]`.
pub fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    TAU * (1.0 - u)
}

/// `n` independent von Mises draws.
pub fn sample_von_mises(d: &VonMises, n: usize, seed: SeedSpec) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..n).map(|_| d.sample(&mut rng)).collect()
}

/// `n` independent exponential delays with mean `tau_rms`.
pub fn sample_exponential_delays(tau_rms: f64, n: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    if !(tau_rms > 0.0) || !tau_rms.is_finite() {
        return Err(Error::Domain(format!("tau_rms must be positive, got {tau_rms}")));
    }
    let mut rng = seed.rng();
    Ok((0..n)
        .map(|_| {
            let u: f64 = rng.random();
            -tau_rms * (-u).ln_1p()
        })
        .collect())
}

/// Scatterers drawn for one ellipse.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRealization {
    pub tau0: f64,
    /// Normalized gain.
    pub gain: f64,
    pub aoa: Vec<f64>,
    /// Absent when the path has no inverse eccentricity and the Tx has one antenna.
    pub aod: Option<Vec<f64>>,
    pub phase: Vec<f64>,
    pub doppler: Vec<f64>,
}

/// One Monte Carlo draw of every scatterer in the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ScattererRealization {
    pub paths: Vec<PathRealization>,
}

impl ScattererRealization {
    pub fn n_scatterers(&self) -> usize {
        self.paths.iter().map(|p| p.aoa.len()).sum()
    }
}

/// Gains rescaled so that `Σ c² = 1`; warns when the input is not normalized.
pub fn normalized_gains(paths: &[EllipsePath]) -> Result<Vec<f64>> {
    let power: f64 = paths.iter().map(|p| p.gain * p.gain).sum();
    if !(power > 0.0) || !power.is_finite() {
        return Err(Error::Config(format!("total path power must be positive, got {power}")));
    }
    if (power - 1.0).abs() > 1e-9 {
        log::warn!("path gains carry total power {power}; rescaling to 1");
    }
    let scale = power.sqrt().recip();
    Ok(paths.iter().map(|p| p.gain * scale).collect())
}

/// Draw AOAs, AODs, phases and Doppler shifts for every path.
pub fn generate_realization(
    cfg: &ArrayConfig,
    paths: &[EllipsePath],
    seed: SeedSpec,
) -> Result<ScattererRealization> {
    cfg.validate()?;
    for p in paths {
        p.validate()?;
    }
    let gains = normalized_gains(paths)?;
    let f_max = cfg.f_max();
    let mut out = Vec::with_capacity(paths.len());
    for (l, (path, gain)) in paths.iter().zip(gains).enumerate() {
        let stream = seed.derive(TAG_PATHS).derive(l as u64);
        let n = path.n_scatterers;
        let aoa = sample_von_mises(&path.aoa, n, stream.derive(TAG_AOA));
        let aod = match path.k_ell {
            Some(_) => Some(aoa.iter().map(|&a| aoa_to_aod(path, a)).collect::<Result<Vec<_>>>()?),
            None if cfg.m_t > 1 => {
                return Err(Error::Config(format!(
                    "path {l} has no inverse eccentricity but the Tx has {} antennas",
                    cfg.m_t
                )))
            }
            None => None,
        };
        let mut rng = stream.derive(TAG_PHASE).rng();
        let phase = (0..n).map(|_| uniform_angle(&mut rng)).collect();
        let doppler = aoa.iter().map(|&a| f_max * (a - cfg.alpha_v).cos()).collect();
        out.push(PathRealization {
            tau0: path.tau0,
            gain,
            aoa,
            aod,
            phase,
            doppler,
        });
    }
    Ok(ScattererRealization { paths: out })
}

/// Random cluster ensemble: exponential delays, `κ ~ U(kappa_range)`,
/// mean AOA `~ U(mean_range)` and equal gains `1/√L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterSpec {
    pub n_paths: usize,
    pub n_scatterers: usize,
    pub tau_rms: f64,
    pub kappa_range: (f64, f64),
    pub mean_range: (f64, f64),
    pub k_ell: Option<f64>,
}

impl ClusterSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1 || self.n_scatterers < 1 {
            return Err(Error::Config("cluster ensembles need paths and scatterers".into()));
        }
        if !(self.tau_rms > 0.0) {
            return Err(Error::Config(format!("tau_rms must be positive, got {}", self.tau_rms)));
        }
        let (k0, k1) = self.kappa_range;
        if !(k0 >= 0.0 && k1 >= k0 && k1 <= MAX_ARGUMENT) {
            return Err(Error::Config(format!("invalid kappa range ({k0}, {k1})")));
        }
        let (m0, m1) = self.mean_range;
        if !(m0.is_finite() && m1.is_finite() && m1 >= m0) {
            return Err(Error::Config(format!("invalid mean-AOA range ({m0}, {m1})")));
        }
        Ok(())
    }

    pub fn generate(&self, seed: SeedSpec) -> Result<Vec<EllipsePath>> {
        self.validate()?;
        let delays = sample_exponential_delays(self.tau_rms, self.n_paths, seed.derive(TAG_DELAY))?;
        let mut kappa_rng = seed.derive(TAG_KAPPA).rng();
        let mut mean_rng = seed.derive(TAG_MEAN).rng();
        let gain = (self.n_paths as f64).sqrt().recip();
        delays
            .into_iter()
            .map(|tau0| {
                let (k0, k1) = self.kappa_range;
                let (m0, m1) = self.mean_range;
                let kappa = k0 + (k1 - k0) * kappa_rng.random::<f64>();
                let mu = m0 + (m1 - m0) * mean_rng.random::<f64>();
                let mut path = EllipsePath::new(tau0, gain, VonMises::new(mu, kappa)?, self.n_scatterers);
                path.k_ell = self.k_ell;
                Ok(path)
            })
            .collect()
    }
}
