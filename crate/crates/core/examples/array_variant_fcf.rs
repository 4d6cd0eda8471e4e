//! Frequency correlation seen by different elements of a 100-element
//! array, and the coherence bandwidth each of them gets.

use std::f64::consts::FRAC_PI_2;

use gbsm_drift::correlation::path_fcf_closed;
use gbsm_drift::delay_stats::{coherence_bandwidth, coherence_constant_detail, Bandwidth, Orientation};
use gbsm_drift::geometry::element_offset;
use gbsm_drift::{AntennaIndex, ArrayConfig, VonMises, SPEED_OF_LIGHT};

fn main() -> gbsm_drift::Result<()> {
    let f0 = 2e9;
    let cfg = ArrayConfig::new(f0).with_rx(100, SPEED_OF_LIGHT / f0 / 2.0, FRAC_PI_2);
    let d = VonMises::new(0.0, 0.0)?;
    let antennas = [50, 75, 100];

    println!("|R(nu)| for an isotropic path");
    println!("{:>10} {:>9} {:>9} {:>9}", "nu (MHz)", "A50", "A75", "A100");
    for i in 0..=10 {
        let nu = i as f64 * 10e6;
        let row: Vec<String> = antennas
            .iter()
            .map(|&q| {
                let delta = element_offset(&cfg, AntennaIndex::rx(q))?;
                Ok(format!("{:>9.5}", path_fcf_closed(&d, delta, cfg.beta_r, nu)?.norm()))
            })
            .collect::<gbsm_drift::Result<_>>()?;
        println!("{:>10.0} {}", nu / 1e6, row.join(" "));
    }

    let c = coherence_constant_detail(&d, 0.5, Orientation::Worst)?;
    println!("\n0.5 coherence constant: {:.4e} Hz·m (normalized lag {:.6})", c.value, c.x);
    for q in [1, 25, 50, 60, 75, 100] {
        let delta = element_offset(&cfg, AntennaIndex::rx(q))?;
        match coherence_bandwidth(&d, 0.5, delta, Orientation::Worst)? {
            Bandwidth::Finite(b) => println!("  A{q:<3} offset {:>8.4} m  B = {:>10.3} MHz", delta, b / 1e6),
            Bandwidth::Unbounded => println!("  A{q:<3} at the focus, no decorrelation"),
        }
    }
    Ok(())
}
