//! Spatial correlation of two neighbouring elements as a function of the
//! operating frequency. Lower frequencies see a shorter electrical
//! spacing and so a higher correlation.

use std::f64::consts::FRAC_PI_2;

use gbsm_drift::correlation::{scf_closed, scf_narrowband, scf_numeric};
use gbsm_drift::{ArrayConfig, EllipsePath, VonMises, SPEED_OF_LIGHT};

fn main() -> gbsm_drift::Result<()> {
    let f0 = 2e9;
    let lambda = SPEED_OF_LIGHT / f0;
    let cfg = ArrayConfig::new(f0).with_rx(2, lambda / 2.0, FRAC_PI_2);
    let spacing = lambda / 2.0;

    println!("{:>10} {:>10} {:>10} {:>10}", "f (GHz)", "kappa 0", "kappa 5", "kappa 10");
    for i in -4..=4 {
        let f = i as f64 * 0.25e9;
        let row: Vec<String> = [0.0, 5.0, 10.0]
            .iter()
            .map(|&k| Ok(format!("{:>10.5}", scf_closed(&VonMises::new(0.0, k)?, f, spacing, FRAC_PI_2, &cfg)?.norm())))
            .collect::<gbsm_drift::Result<_>>()?;
        println!("{:>10.2} {}", (f0 + f) / 1e9, row.join(" "));
    }

    let d = VonMises::new(0.0, 5.0)?;
    let narrow = scf_narrowband(&d, spacing, FRAC_PI_2, &cfg)?;
    println!("\nconventional (carrier) value for kappa 5: {:.6}", narrow.norm());

    // quadrature over the AOA law agrees with the closed form
    let path = [EllipsePath::new(0.0, 1.0, d, 1)];
    let f = -0.5e9;
    let closed = scf_closed(&d, f, spacing, FRAC_PI_2, &cfg)?;
    let quad = scf_numeric(&cfg, &path, f, 0.0, spacing)?;
    println!("closed vs quadrature at -0.5 GHz: {:.3e}", (closed - quad).norm());
    Ok(())
}
