use std::f64::consts::TAU;

use gbsm_drift::correlation::{path_fcf_closed, scf_closed, scf_narrowband, stfcf};
use gbsm_drift::delay_stats::{
    coherence_bandwidth, composite_pdp, delay_moments, drift_cdf, Bandwidth, Orientation,
};
use gbsm_drift::geometry::{element_offset, offset_delay};
use gbsm_drift::math::bessel::bessel_i;
use gbsm_drift::{AntennaIndex, ArrayConfig, Complex64, CorrelationQuery, EllipsePath, VonMises, SPEED_OF_LIGHT};
use proptest::prelude::*;

const F0: f64 = 2e9;

fn lambda() -> f64 {
    SPEED_OF_LIGHT / F0
}

fn law() -> impl Strategy<Value = VonMises> {
    (0.0..TAU, 0.0..30.0f64).prop_map(|(m, k)| VonMises::new(m, k).unwrap())
}

fn paths() -> impl Strategy<Value = Vec<EllipsePath>> {
    prop::collection::vec(
        (0.0..200e-9f64, 0.1..1.0f64, law(), 1.1..4.0f64)
            .prop_map(|(t, g, d, k)| EllipsePath::new(t, g, d, 1).with_k(k)),
        1..4,
    )
}

fn array() -> impl Strategy<Value = ArrayConfig> {
    (2..64usize, 1..4usize, 0.1..1.0f64, 0.0..TAU, 0.0..TAU, 0.0..60.0f64, 0.0..TAU).prop_map(
        |(m_r, m_t, d, br, bt, v, av)| {
            ArrayConfig::new(F0)
                .with_rx(m_r, d * lambda(), br)
                .with_tx(m_t, d * lambda(), bt)
                .with_motion(v, av)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stfcf_is_hermitian_and_bounded(
        cfg in array(),
        paths in paths(),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
        dt in -5e-3..5e-3f64,
        f in -0.5e9..0.5e9f64,
        nu in -100e6..100e6f64,
    ) {
        let q = a.index(cfg.m_r) + 1;
        let q2 = b.index(cfg.m_r) + 1;
        let query = CorrelationQuery::new(1, q).with_partner(cfg.m_t, q2).with_lags(dt, f, nu);
        let swapped = CorrelationQuery {
            p: query.p_prime,
            p_prime: query.p,
            q: query.q_prime,
            q_prime: query.q,
            ..query.with_lags(-dt, f + nu, -nu)
        };
        let x = stfcf(&cfg, &paths, &query).unwrap();
        let y = stfcf(&cfg, &paths, &swapped).unwrap();
        prop_assert!((x - y.conj()).norm() < 1e-10);
        prop_assert!(x.norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn path_fcf_depends_on_offset_times_lag(d in law(), beta in 0.0..TAU, delta in 0.05..10.0f64, nu in -200e6..200e6f64, s in 0.1..10.0f64) {
        let a = path_fcf_closed(&d, delta, beta, nu).unwrap();
        let b = path_fcf_closed(&d, delta * s, beta, nu / s).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn scf_is_nearly_frequency_flat_in_narrow_band(d in law(), beta in 0.0..TAU, f in -2e6..2e6f64) {
        let cfg = ArrayConfig::new(F0);
        let wide = scf_closed(&d, f, lambda() / 2.0, beta, &cfg).unwrap();
        let narrow = scf_narrowband(&d, lambda() / 2.0, beta, &cfg).unwrap();
        // magnitudes only: the phase moves by up to π·|f|/f0
        prop_assert!((wide.norm() - narrow.norm()).abs() < 1e-3);
    }

    #[test]
    fn scf_frequency_sensitivity_is_bounded(d in law(), beta in 0.0..TAU, lags in 1..40u32, f in -0.9e9..0.9e9f64) {
        // the SCF is E[e^{jx cos}] at x = kΔ(1 + f/f0), whose slope in x is at most 1
        let cfg = ArrayConfig::new(F0);
        let delta = lags as f64 * lambda() / 2.0;
        let wide = scf_closed(&d, f, delta, beta, &cfg).unwrap();
        let narrow = scf_narrowband(&d, delta, beta, &cfg).unwrap();
        let bound = TAU / lambda() * delta * (f / F0).abs();
        prop_assert!((wide - narrow).norm() <= bound + 1e-12);
    }

    #[test]
    fn coherence_bandwidth_marks_first_crossing(kappa in 0.0..20.0f64, mu in 0.0..TAU, beta_r in 0.0..TAU, rho in 0.1..0.9f64, q in 60..=100usize) {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, beta_r);
        let d = VonMises::new(mu, kappa).unwrap();
        let delta = element_offset(&cfg, AntennaIndex::rx(q)).unwrap();
        let b = match coherence_bandwidth(&d, rho, delta, Orientation::Tilt(beta_r)) {
            Ok(Bandwidth::Finite(b)) => b,
            Ok(Bandwidth::Unbounded) => unreachable!(),
            Err(_) => return Ok(()),
        };
        let at = |nu: f64| path_fcf_closed(&d, delta, beta_r, nu).unwrap().norm();
        prop_assert!((at(b) - rho).abs() < 1e-8);
        for i in 0..20 {
            prop_assert!(at(b * i as f64 / 20.0) > rho - 1e-9);
        }
    }

    #[test]
    fn drift_cdf_is_a_distribution(d in law(), tau_q in -50e-9..50e-9f64, beta in 0.0..TAU, u in prop::collection::vec(-1.2..1.2f64, 2..8)) {
        prop_assume!(tau_q.abs() > 1e-12);
        let mut t: Vec<f64> = u.iter().map(|x| x * tau_q.abs()).collect();
        t.sort_by(f64::total_cmp);
        let c: Vec<f64> = t.iter().map(|&t| drift_cdf(&d, tau_q, beta, t).unwrap()).collect();
        for w in c.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        prop_assert!(c.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        prop_assert!(drift_cdf(&d, tau_q, beta, 1.01 * tau_q.abs()).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn pdp_mass_and_moments(paths in paths(), q in 1..=100usize) {
        let cfg = ArrayConfig::new(F0).with_rx(100, lambda() / 2.0, 0.3);
        let ant = AntennaIndex::rx(q);
        let tq = offset_delay(&cfg, ant).unwrap().abs();
        let axis: Vec<f64> = (0..800).map(|i| -tq - 1e-9 + i as f64 * (202e-9 + 2.0 * tq) / 799.0).collect();
        let curve = composite_pdp(&cfg, &paths, ant, &axis).unwrap();
        prop_assert!((curve.total_mass().unwrap() - 1.0).abs() < 1e-9);
        prop_assert!(curve.density.iter().all(|&x| x >= 0.0));
        let m = delay_moments(&cfg, &paths, ant).unwrap();
        prop_assert!(m.rms >= 0.0 && m.rms.is_finite());
        let lo = paths.iter().map(|p| p.tau0).fold(f64::INFINITY, f64::min) - tq;
        let hi = paths.iter().map(|p| p.tau0).fold(f64::NEG_INFINITY, f64::max) + tq;
        prop_assert!(m.mean >= lo - 1e-15 && m.mean <= hi + 1e-15);
    }

    #[test]
    fn i0_is_even(re in -40.0..40.0f64, im in -40.0..40.0f64) {
        let z = Complex64::new(re, im);
        let a = bessel_i(0, z).unwrap();
        let b = bessel_i(0, -z).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }
}
