//! Brute-force estimates from simulated scatterers against the closed
//! forms, reported as z-scores.

use gbsm_drift::correlation::{stfcf, Axis};
use gbsm_drift::delay_stats::delay_moments;
use gbsm_drift::montecarlo::{empirical_delay_moments, empirical_fcf, estimate_stfcf, EstimatorConfig};
use gbsm_drift::{AntennaIndex, ArrayConfig, CorrelationQuery, EllipsePath, SeedSpec, VonMises, SPEED_OF_LIGHT};

fn main() -> gbsm_drift::Result<()> {
    let f0 = 2e9;
    let lambda = SPEED_OF_LIGHT / f0;
    let cfg = ArrayConfig::new(f0).with_rx(100, lambda / 2.0, 0.4).with_motion(20.0, 1.0);
    let paths = vec![
        EllipsePath::new(20e-9, 0.8, VonMises::new(0.5, 3.0)?, 100),
        EllipsePath::new(55e-9, 0.6, VonMises::new(3.0, 0.5)?, 100),
    ];
    let est = EstimatorConfig::new(500, SeedSpec::new(2024));

    let query = CorrelationQuery::new(1, 10).with_partner(1, 12).with_lags(1e-3, 0.2e9, 15e6);
    let exact = stfcf(&cfg, &paths, &query)?;
    let e = estimate_stfcf(&cfg, &paths, &query, &est)?;
    println!("STFCF exact {:.5}  estimate {:.5}  z {:.2}", exact, e.value, e.z_score(exact));

    let q = AntennaIndex::rx(100);
    // zero lag is excluded: the estimate is exactly 1 there
    let nu = Axis::linspace("nu", "Hz", -35e6, 35e6, 8);
    let fcf = empirical_fcf(&cfg, &paths, q, nu.clone(), &est)?;
    for (i, v) in nu.samples.iter().enumerate() {
        let exact = gbsm_drift::correlation::fcf(&cfg, &paths, q, AntennaIndex::tx(1), *v)?;
        println!(
            "FCF at {:>6.1} MHz: |exact| {:.4}  |estimate| {:.4}  z {:.2}",
            v / 1e6,
            exact.norm(),
            fcf.grid.values[i].norm(),
            (fcf.grid.values[i] - exact).norm() / fcf.std_error[i]
        );
    }

    let closed = delay_moments(&cfg, &paths, q)?;
    let m = empirical_delay_moments(&cfg, &paths, q, &est)?;
    println!(
        "mean {:.4} ns vs {:.4} ± {:.4} ns; rms {:.4} ns vs {:.4} ± {:.4} ns",
        closed.mean * 1e9,
        m.mean * 1e9,
        m.mean_std_error * 1e9,
        closed.rms * 1e9,
        m.rms * 1e9,
        m.rms_std_error * 1e9
    );
    Ok(())
}
