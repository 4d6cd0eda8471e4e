//! When does the space-time-frequency correlation factor into a time part
//! and a frequency part? Small arrays and narrow lags: yes. A large array
//! at wide lags: no.

use gbsm_drift::correlation::separability_gap;
use gbsm_drift::{ArrayConfig, CorrelationQuery, EllipsePath, VonMises, SPEED_OF_LIGHT};

fn main() -> gbsm_drift::Result<()> {
    let f0 = 2e9;
    let lambda = SPEED_OF_LIGHT / f0;
    let path = [EllipsePath::new(50e-9, 1.0, VonMises::new(0.4, 3.0)?, 1)];

    println!("{:>6} {:>10} {:>12}", "M_R", "nu (MHz)", "gap");
    for m_r in [2, 16, 64, 100] {
        let cfg = ArrayConfig::new(f0).with_rx(m_r, lambda / 2.0, 0.0).with_motion(30.0, 0.3);
        for nu in [1e6, 10e6, 100e6] {
            let q = CorrelationQuery::new(1, m_r).with_partner(1, m_r).with_lags(0.5e-3, 0.0, nu);
            println!("{m_r:>6} {:>10.0} {:>12.3e}", nu / 1e6, separability_gap(&cfg, &path, &q)?);
        }
    }
    Ok(())
}
