//! One ellipse: where a scatterer at a given AOA sits, the AOD it
//! implies, and how well the first-order delay drift tracks the exact
//! path length across a 100-element array.

use std::f64::consts::PI;

use gbsm_drift::geometry::{aoa_to_aod, aod_branch_angle, drift_delay, exact_delay, offset_delay};
use gbsm_drift::{AntennaIndex, ArrayConfig, EllipsePath, VonMises, SPEED_OF_LIGHT};

fn main() -> gbsm_drift::Result<()> {
    let f0 = 2e9;
    let lambda = SPEED_OF_LIGHT / f0;
    let cfg = ArrayConfig::new(f0).with_rx(100, lambda / 2.0, 0.0);
    let path = EllipsePath::new(200e-9, 1.0, VonMises::new(0.0, 4.0)?, 1).with_k(1.5);

    println!("branch boundary for k = 1.5: {:.4} rad", aod_branch_angle(1.5));
    println!("{:>8} {:>8}", "AOA", "AOD");
    for i in 0..8 {
        let a = 2.0 * PI * i as f64 / 8.0;
        println!("{a:>8.4} {:>8.4}", aoa_to_aod(&path, a)?);
    }

    let tx = AntennaIndex::tx(1);
    println!("\nantenna  tau_q (ns)  drift (ns)  exact (ns)  error (ps)");
    for q in [1, 25, 50, 75, 100] {
        let rx = AntennaIndex::rx(q);
        let alpha = PI / 3.0;
        let aod = aoa_to_aod(&path, alpha)?;
        // both relative to the focus-to-focus delay τ₀; the gap at the edges is
        // the wavefront curvature that a first-order drift leaves out
        let drift = drift_delay(&cfg, &path, tx, rx, aod, alpha)? - path.tau0;
        let exact = exact_delay(&cfg, &path, tx, rx, alpha)? - path.tau0;
        println!(
            "{q:>7}  {:>10.4}  {:>10.4}  {:>10.4}  {:>10.3}",
            offset_delay(&cfg, rx)? * 1e9,
            drift * 1e9,
            exact * 1e9,
            (exact - drift) * 1e12
        );
    }
    Ok(())
}
