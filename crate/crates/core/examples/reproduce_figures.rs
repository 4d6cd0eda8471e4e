//! Regenerate the four reference figures as CSV files, the same way the
//! `gbsm fig2` ... `gbsm fig5` subcommands do.
//!
//! ```text
//! cargo run --release --example reproduce_figures -- out/
//! ```

use gbsm_drift::experiment::{figure_config, Figure, FigureFlags};

fn main() -> gbsm_drift::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    for fig in [Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5] {
        let flags = FigureFlags {
            seed: Some(1),
            out: Some(out.clone().into()),
            gnuplot: true,
            ..FigureFlags::default()
        };
        let cfg = figure_config(fig, None, &[], &flags)?;
        println!("{} (config {})", fig.name(), cfg.hash());
        for path in fig.run(&cfg)? {
            println!("  {}", path.display());
        }
    }
    Ok(())
}
