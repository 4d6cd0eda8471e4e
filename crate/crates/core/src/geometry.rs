//! Elliptical scattering geometry: array element offsets, the AOA→AOD
//! mapping between the two foci, and the array-variant propagation delay.
//!
//! The Rx array centre sits at the focus `(+f, 0)` and the Tx array centre at
//! `(-f, 0)`. Angles are measured from the respective array centres and are
//! reduced to `(0, 2π]`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::stochastic::VonMises;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Geometry of the Tx and Rx uniform linear arrays plus carrier and motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    /// Number of Tx elements `M_T`.
    pub m_t: usize,
    /// Number of Rx elements `M_R`.
    pub m_r: usize,
    /// Tx element spacing, m.
    pub delta_t: f64,
    /// Rx element spacing, m.
    pub delta_r: f64,
    /// Tx array tilt wrt the x-axis, rad.
    pub beta_t: f64,
    /// Rx array tilt wrt the x-axis, rad.
    pub beta_r: f64,
    /// Carrier frequency, Hz.
    pub f0: f64,
    /// Rx speed, m/s.
    pub v: f64,
    /// Direction of motion wrt the x-axis, rad.
    pub alpha_v: f64,
}

impl ArrayConfig {
    /// Single antenna at both ends, static receiver.
    pub fn new(f0: f64) -> Self {
        Self {
            m_t: 1,
            m_r: 1,
            delta_t: 0.0,
            delta_r: 0.0,
            beta_t: 0.0,
            beta_r: 0.0,
            f0,
            v: 0.0,
            alpha_v: 0.0,
        }
    }

    pub fn with_rx(mut self, m_r: usize, delta_r: f64, beta_r: f64) -> Self {
        self.m_r = m_r;
        self.delta_r = delta_r;
        self.beta_r = beta_r;
        self
    }

    pub fn with_tx(mut self, m_t: usize, delta_t: f64, beta_t: f64) -> Self {
        self.m_t = m_t;
        self.delta_t = delta_t;
        self.beta_t = beta_t;
        self
    }

    pub fn with_motion(mut self, v: f64, alpha_v: f64) -> Self {
        self.v = v;
        self.alpha_v = alpha_v;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_t < 1 || self.m_r < 1 {
            return Err(Error::Config("arrays need at least one element".into()));
        }
        let finite = [self.delta_t, self.delta_r, self.beta_t, self.beta_r, self.f0, self.v, self.alpha_v];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("array parameters must be finite".into()));
        }
        if self.delta_t < 0.0 || self.delta_r < 0.0 {
            return Err(Error::Config("element spacings must be non-negative".into()));
        }
        if !(self.f0 > 0.0) {
            return Err(Error::Config(format!("carrier frequency must be positive, got {}", self.f0)));
        }
        if self.v < 0.0 {
            return Err(Error::Config(format!("speed must be non-negative, got {}", self.v)));
        }
        Ok(())
    }

    /// Carrier wavelength `λ₀ = c₀/f₀`.
    pub fn lambda0(&self) -> f64 {
        SPEED_OF_LIGHT / self.f0
    }

    /// Wavenumber `2π/λ₀`.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.lambda0()
    }

    /// Maximum Doppler frequency `v/λ₀`.
    pub fn f_max(&self) -> f64 {
        self.v / self.lambda0()
    }

    /// Whether any Tx element sits away from the Tx focus.
    pub fn has_tx_drift(&self) -> bool {
        self.m_t > 1 && self.delta_t > 0.0
    }

    fn side(&self, side: Side) -> (usize, f64) {
        match side {
            Side::Tx => (self.m_t, self.delta_t),
            Side::Rx => (self.m_r, self.delta_r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Tx,
    Rx,
}

/// A 1-based antenna index on one side of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AntennaIndex {
    pub side: Side,
    pub index: usize,
}

impl AntennaIndex {
    pub fn tx(p: usize) -> Self {
        Self { side: Side::Tx, index: p }
    }

    pub fn rx(q: usize) -> Self {
        Self { side: Side::Rx, index: q }
    }
}

/// One confocal ellipse of scatterers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsePath {
    /// Centre-to-centre delay `τ₀`, s.
    pub tau0: f64,
    /// Amplitude gain `c`.
    pub gain: f64,
    /// AOA distribution.
    pub aoa: VonMises,
    /// Number of scatterers on the ellipse.
    pub n_scatterers: usize,
    /// Inverse eccentricity `a/f`, needed for the AOD mapping.
    pub k_ell: Option<f64>,
}

impl EllipsePath {
    pub fn new(tau0: f64, gain: f64, aoa: VonMises, n_scatterers: usize) -> Self {
        Self {
            tau0,
            gain,
            aoa,
            n_scatterers,
            k_ell: None,
        }
    }

    pub fn with_k(mut self, k_ell: f64) -> Self {
        self.k_ell = Some(k_ell);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau0 >= 0.0) || !self.tau0.is_finite() {
            return Err(Error::Config(format!("path delay must be finite and >= 0, got {}", self.tau0)));
        }
        if !(self.gain >= 0.0) || !self.gain.is_finite() {
            return Err(Error::Config(format!("path gain must be finite and >= 0, got {}", self.gain)));
        }
        if self.n_scatterers < 1 {
            return Err(Error::Config("a path needs at least one scatterer".into()));
        }
        if let Some(k) = self.k_ell {
            if !(k > 1.0) || !k.is_finite() {
                return Err(Error::Config(format!(
                    "inverse eccentricity must exceed 1 (k = 1 collapses the ellipse), got {k}"
                )));
            }
        }
        Ok(())
    }

    fn k(&self) -> Result<f64> {
        match self.k_ell {
            Some(k) if k > 1.0 && k.is_finite() => Ok(k),
            Some(k) => Err(Error::Config(format!("inverse eccentricity must exceed 1, got {k}"))),
            None => Err(Error::Config(
                "the AOD mapping needs the path's inverse eccentricity k".into(),
            )),
        }
    }
}

/// Reduce an angle to `(0, 2π]`.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r == 0.0 {
        TAU
    } else {
        r
    }
}

/// Signed distance of an element from its array centre,
/// `δ = (M − 2i + 1)·spacing/2`. Element 1 has the most positive offset.
pub fn element_offset(cfg: &ArrayConfig, ant: AntennaIndex) -> Result<f64> {
    let (m, spacing) = cfg.side(ant.side);
    if ant.index < 1 || ant.index > m {
        return Err(Error::Domain(format!(
            "{:?} antenna {} outside 1..={m}",
            ant.side, ant.index
        )));
    }
    Ok((m as f64 - 2.0 * ant.index as f64 + 1.0) * spacing / 2.0)
}

/// Delay from the array centre to the element, `δ/c₀`.
pub fn offset_delay(cfg: &ArrayConfig, ant: AntennaIndex) -> Result<f64> {
    Ok(element_offset(cfg, ant)? / SPEED_OF_LIGHT)
}

/// Angle of departure seen from the Tx focus for a scatterer at AOA `alpha_r`.
pub fn aoa_to_aod(path: &EllipsePath, alpha_r: f64) -> Result<f64> {
    let k = path.k()?;
    Ok(aod_for_k(k, alpha_r))
}

/// Branch boundary `α₀ = π − arctan((k²−1)/(2k))`.
pub fn aod_branch_angle(k: f64) -> f64 {
    PI - ((k * k - 1.0) / (2.0 * k)).atan()
}

pub(crate) fn aod_for_k(k: f64, alpha_r: f64) -> f64 {
    let alpha = normalize_angle(alpha_r);
    let alpha0 = aod_branch_angle(k);
    let num = (k * k - 1.0) * alpha.sin();
    let den = 2.0 * k + (k * k + 1.0) * alpha.cos();
    // the denominator is >= 0 on the outer branches and <= 0 on the middle one;
    // pinning its sign keeps rounding at the boundaries on the right side
    let outer = if den <= 0.0 { 0.0 } else { den };
    let (den, offset) = if alpha <= alpha0 {
        (outer, 0.0)
    } else if alpha <= TAU - alpha0 {
        (if den >= 0.0 { -0.0 } else { den }, PI)
    } else {
        (outer, TAU)
    };
    // arctan(num/den) without dividing by a vanishing denominator
    let g = (num * den.signum()).atan2(den.abs());
    normalize_angle(g + offset)
}

/// First-order array-variant delay
/// `τ₀ − τ_p cos(α_T − β_T) − τ_q cos(α_R − β_R)`.
pub fn drift_delay(
    cfg: &ArrayConfig,
    path: &EllipsePath,
    p: AntennaIndex,
    q: AntennaIndex,
    alpha_t: f64,
    alpha_r: f64,
) -> Result<f64> {
    let tau_p = offset_delay(cfg, tx_index(p)?)?;
    let tau_q = offset_delay(cfg, rx_index(q)?)?;
    Ok(path.tau0 - tau_p * (alpha_t - cfg.beta_t).cos() - tau_q * (alpha_r - cfg.beta_r).cos())
}

/// Semi-major axis, focal distance and scatterer position for a path whose
/// centre-to-centre delay fixes `2a = c₀τ₀`.
pub fn scatterer_position(path: &EllipsePath, alpha_r: f64) -> Result<(f64, f64, [f64; 2])> {
    let k = path.k()?;
    let a = SPEED_OF_LIGHT * path.tau0 / 2.0;
    let f = a / k;
    let b2 = a * a - f * f;
    let r = b2 / (a + f * alpha_r.cos());
    Ok((a, f, [f + r * alpha_r.cos(), r * alpha_r.sin()]))
}

/// Exact two-segment delay `(D_T + D_R)/c₀` through the scatterer at AOA
/// `alpha_r`, with the antennas placed along their tilted arrays.
pub fn exact_delay(
    cfg: &ArrayConfig,
    path: &EllipsePath,
    p: AntennaIndex,
    q: AntennaIndex,
    alpha_r: f64,
) -> Result<f64> {
    let delta_p = element_offset(cfg, tx_index(p)?)?;
    let delta_q = element_offset(cfg, rx_index(q)?)?;
    let (_, f, s) = scatterer_position(path, alpha_r)?;
    let tx = [-f + delta_p * cfg.beta_t.cos(), delta_p * cfg.beta_t.sin()];
    let rx = [f + delta_q * cfg.beta_r.cos(), delta_q * cfg.beta_r.sin()];
    let d_t = (s[0] - tx[0]).hypot(s[1] - tx[1]);
    let d_r = (s[0] - rx[0]).hypot(s[1] - rx[1]);
    Ok((d_t + d_r) / SPEED_OF_LIGHT)
}

fn tx_index(p: AntennaIndex) -> Result<AntennaIndex> {
    match p.side {
        Side::Tx => Ok(p),
        Side::Rx => Err(Error::Domain("expected a Tx antenna index".into())),
    }
}

fn rx_index(q: AntennaIndex) -> Result<AntennaIndex> {
    match q.side {
        Side::Rx => Ok(q),
        Side::Tx => Err(Error::Domain("expected an Rx antenna index".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F0: f64 = 2e9;

    fn lambda() -> f64 {
        SPEED_OF_LIGHT / F0
    }

    fn ula100() -> ArrayConfig {
        ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.0)
    }

    fn path(k: f64) -> EllipsePath {
        EllipsePath::new(100e-9, 1.0, VonMises::uniform(), 1).with_k(k)
    }

    // angle of the scatterer seen from the Tx focus, straight from coordinates
    fn aod_oracle(k: f64, alpha_r: f64) -> f64 {
        let p = EllipsePath::new(1e-6, 1.0, VonMises::uniform(), 1).with_k(k);
        let (_, f, s) = scatterer_position(&p, alpha_r).unwrap();
        normalize_angle(s[1].atan2(s[0] + f))
    }

    fn angle_gap(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn offsets() {
        let cfg = ula100();
        let d50 = element_offset(&cfg, AntennaIndex::rx(50)).unwrap();
        assert!((d50 - lambda() / 4.0).abs() < 1e-15);
        let d100 = element_offset(&cfg, AntennaIndex::rx(100)).unwrap();
        assert!((d100 + 24.75 * lambda()).abs() < 1e-12);
        assert_eq!(element_offset(&cfg, AntennaIndex::tx(1)).unwrap(), 0.0);
        assert!(matches!(element_offset(&cfg, AntennaIndex::rx(101)), Err(Error::Domain(_))));
        assert!(matches!(element_offset(&cfg, AntennaIndex::rx(0)), Err(Error::Domain(_))));
        let sum: f64 = (1..=100).map(|q| element_offset(&cfg, AntennaIndex::rx(q)).unwrap()).sum();
        assert!(sum.abs() < 1e-12);
    }

    #[test]
    fn aod_examples() {
        let p = path(2.0);
        let near_zero = aoa_to_aod(&p, 1e-12).unwrap();
        assert!(near_zero < 1e-10 || near_zero > TAU - 1e-10);
        assert!((aoa_to_aod(&p, PI).unwrap() - PI).abs() < 1e-12);
        let quarter = aoa_to_aod(&p, PI / 2.0).unwrap();
        assert!((quarter - 0.75f64.atan()).abs() < 1e-12);
        assert!((quarter - 0.643_501_108_793_284_4).abs() < 1e-12);
        assert!((aod_branch_angle(2.0) - 2.498_091_544_796_508_6).abs() < 1e-12);
        assert!((quarter - aod_oracle(2.0, PI / 2.0)).abs() < 1e-12);
        assert!(matches!(
            aoa_to_aod(&EllipsePath::new(1e-7, 1.0, VonMises::uniform(), 1), 1.0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn aod_continuous_at_branch_boundaries() {
        for k in [1.05, 1.5, 2.0, 5.0, 40.0] {
            let a0 = aod_branch_angle(k);
            for edge in [a0, TAU - a0] {
                let left = aod_for_k(k, edge - 1e-12);
                let right = aod_for_k(k, edge + 1e-12);
                let at = aod_for_k(k, edge);
                assert!(angle_gap(left, right) < 1e-9, "k={k} edge={edge}: {left} vs {right}");
                assert!(angle_gap(left, at) < 1e-9, "k={k} edge={edge}: {left} vs {at}");
            }
        }
    }

    #[test]
    fn drift_examples() {
        let cfg = ula100();
        let p = path(2.0);
        let tau = drift_delay(&cfg, &p, AntennaIndex::tx(1), AntennaIndex::rx(100), PI / 2.0, PI / 2.0).unwrap();
        assert_eq!(tau, p.tau0);
        let center = ArrayConfig::new(F0).with_rx(1, 0.0, 0.0);
        for a in [0.1, 1.0, 3.0, 5.5] {
            assert_eq!(drift_delay(&center, &p, AntennaIndex::tx(1), AntennaIndex::rx(1), a, a).unwrap(), p.tau0);
        }
        // δ_q = −24.75 λ₀ = −3.70993166775 m, aligned with the array axis
        let tau = drift_delay(&cfg, &p, AntennaIndex::tx(1), AntennaIndex::rx(100), 0.3, 0.0).unwrap();
        assert!((tau - 112.375e-9).abs() < 1e-18, "{tau}");
    }

    #[test]
    fn exact_delay_at_foci_is_constant() {
        let cfg = ArrayConfig::new(F0);
        let p = path(1.7);
        for i in 0..50 {
            let a = 0.1 + i as f64 * 0.125;
            let t = exact_delay(&cfg, &p, AntennaIndex::tx(1), AntennaIndex::rx(1), a).unwrap();
            assert!((t - p.tau0).abs() < 1e-20);
        }
    }

    #[test]
    fn exact_delay_mirror_symmetry() {
        let cfg = ArrayConfig::new(F0).with_rx(8, lambda() / 2.0, 0.0).with_tx(4, lambda(), 0.0);
        let p = path(3.0);
        for i in 1..40 {
            let a = i as f64 * 0.15;
            let ta = exact_delay(&cfg, &p, AntennaIndex::tx(2), AntennaIndex::rx(7), a).unwrap();
            let tb = exact_delay(&cfg, &p, AntennaIndex::tx(2), AntennaIndex::rx(7), -a).unwrap();
            assert!((ta - tb).abs() < 1e-21);
        }
    }

    #[test]
    fn second_order_remainder_bound() {
        let cfg = ArrayConfig::new(F0).with_rx(2, lambda() / 2.0, 0.4);
        let p = path(1.3);
        let q = AntennaIndex::rx(1);
        let delta = element_offset(&cfg, q).unwrap().abs();
        for i in 0..360 {
            let a = normalize_angle(i as f64 * TAU / 360.0 + 0.01);
            let (_, f, s) = scatterer_position(&p, a).unwrap();
            let r = (s[0] - f).hypot(s[1]);
            let exact = exact_delay(&cfg, &p, AntennaIndex::tx(1), q, a).unwrap();
            let drift = drift_delay(&cfg, &p, AntennaIndex::tx(1), q, 0.0, a).unwrap();
            let bound = delta * delta / (2.0 * (r - delta)) / SPEED_OF_LIGHT;
            assert!((exact - drift).abs() <= bound * (1.0 + 1e-6) + 1e-22, "alpha={a}");
        }
    }

    proptest! {
        #[test]
        fn aod_matches_exact_geometry(k in 1.01f64..50.0, alpha in 1e-6f64..TAU) {
            let got = aod_for_k(k, alpha);
            prop_assert!(got > 0.0 && got <= TAU);
            prop_assert!(angle_gap(got, aod_oracle(k, alpha)) < 1e-9);
        }

        #[test]
        fn normalized_angles_are_in_range(x in -100.0f64..100.0) {
            let y = normalize_angle(x);
            prop_assert!(y > 0.0 && y <= TAU);
            prop_assert!(angle_gap(x, y) < 1e-12);
        }

        #[test]
        fn drift_is_even_in_the_rx_angle(u in -PI..PI, at in 0.0f64..TAU, q in 1usize..=100) {
            let cfg = ula100().with_rx(100, lambda() / 2.0, 0.7);
            let p = path(2.0);
            let a = drift_delay(&cfg, &p, AntennaIndex::tx(1), AntennaIndex::rx(q), at, cfg.beta_r + u).unwrap();
            let b = drift_delay(&cfg, &p, AntennaIndex::tx(1), AntennaIndex::rx(q), at, cfg.beta_r - u).unwrap();
            prop_assert!((a - b).abs() < 1e-20);
        }

        #[test]
        fn first_order_regime(k in 1.2f64..6.0, beta in 0.0f64..TAU, m in 2usize..40) {
            let p = path(k);
            let a = SPEED_OF_LIGHT * p.tau0 / 2.0;
            // closest approach of the ellipse to a focus
            let r_min = a - a / k;
            for ratio in [0.05, 0.038] {
                let half_aperture = ratio * r_min;
                let cfg = ArrayConfig::new(F0).with_rx(m, 2.0 * half_aperture / (m as f64 - 1.0), beta);
                let mut max_err: f64 = 0.0;
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..256 {
                    let alpha = normalize_angle(i as f64 * TAU / 256.0);
                    for q in 1..=m {
                        let ant = AntennaIndex::rx(q);
                        let exact = exact_delay(&cfg, &p, AntennaIndex::tx(1), ant, alpha).unwrap();
                        let drift = drift_delay(&cfg, &p, AntennaIndex::tx(1), ant, 0.0, alpha).unwrap();
                        max_err = max_err.max((exact - drift).abs());
                        lo = lo.min(exact);
                        hi = hi.max(exact);
                    }
                }
                let spread = hi - lo;
                // worst case of the remainder relative to the array-wide spread
                let bound = ratio / (4.0 * (1.0 - ratio));
                prop_assert!(max_err <= bound * spread, "ratio {ratio}: err {max_err} spread {spread}");
                if ratio < 0.0385 {
                    prop_assert!(max_err <= 0.01 * spread);
                }
            }
        }
    }
}
