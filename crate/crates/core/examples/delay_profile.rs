//! Array-variant power delay profile and delay moments for a handful of
//! clusters, at the array centre and at its edge.

use gbsm_drift::delay_stats::{composite_pdp, delay_moments};
use gbsm_drift::geometry::offset_delay;
use gbsm_drift::stochastic::ClusterSpec;
use gbsm_drift::{AntennaIndex, ArrayConfig, SeedSpec, SPEED_OF_LIGHT};

fn main() -> gbsm_drift::Result<()> {
    let f0 = 2e9;
    let cfg = ArrayConfig::new(f0).with_rx(100, SPEED_OF_LIGHT / f0 / 2.0, 0.0);
    let spec = ClusterSpec {
        n_paths: 8,
        n_scatterers: 1,
        tau_rms: 30e-9,
        kappa_range: (0.0, 10.0),
        mean_range: (0.0, std::f64::consts::TAU),
        k_ell: None,
    };
    let paths = spec.generate(SeedSpec::new(11))?;

    let edge = AntennaIndex::rx(100);
    let tau_q = offset_delay(&cfg, edge)?;
    println!("edge offset delay {:.3} ns", tau_q * 1e9);

    let axis: Vec<f64> = (0..240).map(|i| -20e-9 + i as f64 * 0.5e-9).collect();
    for q in [50, 100] {
        let ant = AntennaIndex::rx(q);
        let curve = composite_pdp(&cfg, &paths, ant, &axis)?;
        let m = delay_moments(&cfg, &paths, ant)?;
        let negative: f64 = curve.cells()?.iter().filter(|c| c.0 < 0.0).map(|c| c.1).sum();
        println!(
            "A{q:<3} mean {:>7.3} ns  rms {:>7.3} ns  mass {:.6}  mass below 0 {:.4}",
            m.mean * 1e9,
            m.rms * 1e9,
            curve.total_mass()?,
            negative
        );
    }

    // coarse text plot of the edge profile
    let curve = composite_pdp(&cfg, &paths, edge, &axis)?;
    let peak = curve.density.iter().cloned().fold(0.0, f64::max);
    for (t, p) in curve.tau_axis.iter().zip(&curve.density).step_by(6) {
        println!("{:>7.1} ns |{}", t * 1e9, "#".repeat((60.0 * p / peak).round() as usize));
    }
    Ok(())
}
