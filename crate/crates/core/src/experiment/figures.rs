//! Figure reproduction: each runner writes CSV tables (and optionally a
//! gnuplot script) into the configured output directory.
//!
//! * fig2: |SCF| against frequency for a two-element Rx array.
//! * fig3: path-level |FCF| at antennas 50, 75 and 100 of a 100-element array.
//! * fig4: array-variant PDP for mean AOAs drawn over the full circle and over a π/6 sector.
//! * fig5: the matching FCFs.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, TAU};
use std::path::PathBuf;

use num_complex::Complex64;

use super::config::{ExperimentConfig, Grid, Method, PathSection};
use super::csv::{Cell, CsvTable};
use crate::correlation::{fcf, path_fcf_closed, path_fcf_numeric, scf_closed, Axis, CorrelationQuery};
use crate::delay_stats::{coherence_bandwidth, composite_pdp, delay_moments, Bandwidth, Orientation};
use crate::error::{Error, Result};
use crate::geometry::{element_offset, offset_delay, AntennaIndex, EllipsePath};
use crate::montecarlo::{auto_bins, empirical_delay_moments, empirical_fcf, empirical_pdp, estimate_stfcf, Bins, EstimatorConfig};
use crate::stochastic::{SeedSpec, VonMises};

/// Which figure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    /// Caption defaults, before any file or command-line overrides.
    pub fn defaults(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        let single = |mu: f64| {
            vec![PathSection {
                tau0: 0.0,
                gain: 1.0,
                kappa: 0.0,
                mu,
                scatterers: 100,
                k: None,
            }]
        };
        match self {
            Figure::Fig2 => {
                cfg.array.m_r = 2;
                cfg.array.beta_r = FRAC_PI_2;
                cfg.paths = single(0.0);
                cfg.evaluation.rx = vec![1];
                cfg.evaluation.rx_partner = Some(2);
                cfg.evaluation.f = Grid { min: -1e9, max: 1e9, points: 201 };
            }
            Figure::Fig3 => {
                cfg.array.beta_r = FRAC_PI_2;
                cfg.paths = single(0.0);
                cfg.evaluation.rx = vec![50, 75, 100];
                cfg.evaluation.nu = Grid { min: -100e6, max: 100e6, points: 201 };
            }
            Figure::Fig4 | Figure::Fig5 => {
                cfg.paths.clear();
                cfg.generator = Some(super::config::GeneratorSection {
                    n_paths: 100,
                    scatterers: 100,
                    tau_rms: 30e-9,
                    kappa_min: 0.0,
                    kappa_max: 10.0,
                    mean_min: 0.0,
                    mean_max: TAU,
                    k: None,
                });
                cfg.evaluation.rx = vec![50, 100];
                cfg.evaluation.realizations = 400;
                cfg.evaluation.tau_points = 512;
                cfg.evaluation.nu = Grid { min: -50e6, max: 50e6, points: 201 };
            }
        }
        cfg
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
        let mut written = match self {
            Figure::Fig2 => run_fig2(cfg)?,
            Figure::Fig3 => run_fig3(cfg)?,
            Figure::Fig4 => run_fig4(cfg)?,
            Figure::Fig5 => run_fig5(cfg)?,
        };
        if cfg.output.gnuplot {
            written.push(write_gnuplot(*self, cfg, &written)?);
        }
        Ok(written)
    }
}

fn estimator(cfg: &ExperimentConfig, tag: u64) -> EstimatorConfig {
    let mut est = EstimatorConfig::new(cfg.evaluation.realizations, SeedSpec::new(cfg.seed).derive(tag));
    est.n_scatterers_override = cfg.evaluation.scatterers;
    est
}

fn template(cfg: &ExperimentConfig) -> Result<EllipsePath> {
    let paths = cfg.build_paths()?;
    match paths.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::Config(format!("this figure sweeps a single path; the config defines {}", paths.len()))),
    }
}

fn with_kappa(path: &EllipsePath, kappa: f64) -> Result<EllipsePath> {
    let mut p = *path;
    p.aoa = VonMises::new(path.aoa.mu(), kappa)?;
    Ok(p)
}

fn kappa_label(kappa: f64) -> String {
    format!("{kappa}").replace('.', "p")
}

/// |SCF| between the evaluated Rx pair against frequency, one column pair per κ.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let array = cfg.array_config();
    let ev = &cfg.evaluation;
    let q = ev.rx[0];
    let q2 = ev.rx_partner.unwrap_or(if q == 1 { 2 } else { 1 });
    let p = ev.tx;
    let delta = element_offset(&array, AntennaIndex::rx(q2))? - element_offset(&array, AntennaIndex::rx(q))?;
    let base = template(cfg)?;
    let fs = ev.f.samples()?;
    let mut columns = vec!["f_hz".to_string(), "f_abs_hz".to_string()];
    for &k in &ev.kappas {
        let l = kappa_label(k);
        columns.extend([format!("k{l}_closed_abs"), format!("k{l}_mc_abs"), format!("k{l}_mc_se")]);
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = CsvTable::new(&cfg.hash(), cfg.seed, "closed-form+monte-carlo", &cols);
    let mut data: Vec<Vec<Cell>> = fs.iter().map(|&f| vec![f.into(), (array.f0 + f).into()]).collect();
    for (i, &k) in ev.kappas.iter().enumerate() {
        let path = with_kappa(&base, k)?;
        let est = estimator(cfg, 200 + i as u64);
        for (row, &f) in data.iter_mut().zip(&fs) {
            let closed = scf_closed(&path.aoa, f, delta, array.beta_r, &array)?;
            let query = CorrelationQuery::new(p, q).with_partner(p, q2).with_lags(0.0, f, 0.0);
            let mc = estimate_stfcf(&array, std::slice::from_ref(&path), &query, &est)?;
            row.extend([closed.norm().into(), mc.value.norm().into(), mc.std_error.into()]);
        }
    }
    data.into_iter().for_each(|r| table.push(r));
    Ok(vec![table.write(&cfg.out_dir(), "fig2_scf.csv")?])
}

/// Path-level |FCF| at each evaluated antenna, one file per κ, plus the
/// coherence bandwidths.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let array = cfg.array_config();
    let ev = &cfg.evaluation;
    let base = template(cfg)?;
    let nus = ev.nu.samples()?;
    let dir = cfg.out_dir();
    let mut written = Vec::new();
    let mut bw = CsvTable::new(&cfg.hash(), cfg.seed, "closed-form", &["kappa", "antenna", "delta_q_m", "bandwidth_hz"]);
    for (i, &k) in ev.kappas.iter().enumerate() {
        let path = with_kappa(&base, k)?;
        let mut columns = vec!["nu_hz".to_string()];
        for q in &ev.rx {
            columns.extend([
                format!("a{q}_closed_abs"),
                format!("a{q}_quadrature_abs"),
                format!("a{q}_mc_abs"),
                format!("a{q}_mc_se"),
            ]);
        }
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut table = CsvTable::new(&cfg.hash(), cfg.seed, "closed-form+quadrature+monte-carlo", &cols);
        let mut data: Vec<Vec<Cell>> = nus.iter().map(|&nu| vec![nu.into()]).collect();
        for (j, &q) in ev.rx.iter().enumerate() {
            let ant = AntennaIndex::rx(q);
            let delta_q = element_offset(&array, ant)?;
            let est = estimator(cfg, 300 + (i * 1000 + j) as u64);
            let mc = empirical_fcf(&array, std::slice::from_ref(&path), ant, Axis::new("nu", "Hz", nus.clone()), &est)?;
            for (n, (row, &nu)) in data.iter_mut().zip(&nus).enumerate() {
                let closed = path_fcf_closed(&path.aoa, delta_q, array.beta_r, nu)?;
                let quad = path_fcf_numeric(&array, &path, 0.0, delta_q, nu)?;
                row.extend([
                    closed.norm().into(),
                    quad.norm().into(),
                    mc.grid.values[n].norm().into(),
                    mc.std_error[n].into(),
                ]);
            }
            let b = match coherence_bandwidth(&path.aoa, ev.rho, delta_q, Orientation::Tilt(array.beta_r))? {
                Bandwidth::Finite(b) => b,
                Bandwidth::Unbounded => f64::INFINITY,
            };
            bw.push(vec![k.into(), q.into(), delta_q.into(), b.into()]);
        }
        data.into_iter().for_each(|r| table.push(r));
        written.push(table.write(&dir, &format!("fig3_fcf_k{}.csv", kappa_label(k)))?);
    }
    written.push(bw.write(&dir, "fig3_coherence.csv")?);
    Ok(written)
}

/// Mean-AOA scenarios of figures 4 and 5: full circle and a π/6 sector.
pub const SCENARIOS: [(&str, f64); 2] = [("uniform", TAU), ("sector", FRAC_PI_6)];

fn scenario_paths(cfg: &ExperimentConfig, mean_max: f64) -> Result<(ExperimentConfig, Vec<EllipsePath>)> {
    let mut c = cfg.clone();
    let g = c
        .generator
        .as_mut()
        .ok_or_else(|| Error::Config("figures 4 and 5 need a [generator] section".into()))?;
    g.mean_min = 0.0;
    g.mean_max = mean_max;
    let paths = c.build_paths()?;
    Ok((c, paths))
}

/// Empirical and closed-form PDPs at each antenna plus delay moments.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let array = cfg.array_config();
    let ev = &cfg.evaluation;
    let dir = cfg.out_dir();
    let mut written = Vec::new();
    let mut moments = CsvTable::new(
        &cfg.hash(),
        cfg.seed,
        "closed-form+monte-carlo",
        &[
            "scenario",
            "antenna",
            "tau_q_s",
            "mean_closed_s",
            "rms_closed_s",
            "mean_mc_s",
            "mean_mc_se_s",
            "rms_mc_s",
            "rms_mc_se_s",
            "negative_mass_closed",
        ],
    );
    for (s, (name, mean_max)) in SCENARIOS.iter().enumerate() {
        let (_, paths) = scenario_paths(cfg, *mean_max)?;
        let widest = ev
            .rx
            .iter()
            .map(|&q| offset_delay(&array, AntennaIndex::rx(q)).map(f64::abs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let centers = auto_bins(&paths, widest, ev.tau_points)?;
        let mut columns = vec!["tau_s".to_string()];
        for q in &ev.rx {
            columns.extend([format!("a{q}_mc"), format!("a{q}_mc_se"), format!("a{q}_closed")]);
        }
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut table = CsvTable::new(&cfg.hash(), cfg.seed, "closed-form+monte-carlo", &cols);
        let mut data: Vec<Vec<Cell>> = centers.iter().map(|&t| vec![t.into()]).collect();
        for (j, &q) in ev.rx.iter().enumerate() {
            let ant = AntennaIndex::rx(q);
            let est = estimator(cfg, 400 + (s * 1000 + j) as u64);
            let mc = empirical_pdp(&array, &paths, ant, &Bins::Centers(centers.clone()), &est)?;
            let closed = composite_pdp(&array, &paths, ant, &centers)?;
            for (i, row) in data.iter_mut().enumerate() {
                row.extend([mc.curve.density[i].into(), mc.std_error[i].into(), closed.density[i].into()]);
            }
            let exact = delay_moments(&array, &paths, ant)?;
            let emp = empirical_delay_moments(&array, &paths, ant, &est)?;
            let negative: f64 = closed.cells()?.iter().filter(|c| c.0 < 0.0).map(|c| c.1).sum();
            moments.push(vec![
                (*name).into(),
                q.into(),
                offset_delay(&array, ant)?.into(),
                exact.mean.into(),
                exact.rms.into(),
                emp.mean.into(),
                emp.mean_std_error.into(),
                emp.rms.into(),
                emp.rms_std_error.into(),
                negative.into(),
            ]);
        }
        data.into_iter().for_each(|r| table.push(r));
        written.push(table.write(&dir, &format!("fig4_pdp_{name}.csv"))?);
    }
    written.push(moments.write(&dir, "fig4_moments.csv")?);
    Ok(written)
}

/// Empirical and semi-analytic FCFs at each antenna.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let array = cfg.array_config();
    let ev = &cfg.evaluation;
    let nus = ev.nu.samples()?;
    let dir = cfg.out_dir();
    let mut written = Vec::new();
    for (s, (name, mean_max)) in SCENARIOS.iter().enumerate() {
        let (_, paths) = scenario_paths(cfg, *mean_max)?;
        let mut columns = vec!["nu_hz".to_string()];
        for q in &ev.rx {
            for part in ["mc_re", "mc_im", "mc_abs", "mc_se", "closed_re", "closed_im", "closed_abs"] {
                columns.push(format!("a{q}_{part}"));
            }
        }
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        let mut table = CsvTable::new(&cfg.hash(), cfg.seed, "closed-form+monte-carlo", &cols);
        let mut data: Vec<Vec<Cell>> = nus.iter().map(|&nu| vec![nu.into()]).collect();
        for (j, &q) in ev.rx.iter().enumerate() {
            let ant = AntennaIndex::rx(q);
            let est = estimator(cfg, 500 + (s * 1000 + j) as u64);
            let mc = empirical_fcf(&array, &paths, ant, Axis::new("nu", "Hz", nus.clone()), &est)?;
            for (n, (row, &nu)) in data.iter_mut().zip(&nus).enumerate() {
                let closed: Complex64 = fcf(&array, &paths, ant, AntennaIndex::tx(ev.tx), nu)?;
                let m = mc.grid.values[n];
                row.extend([
                    m.re.into(),
                    m.im.into(),
                    m.norm().into(),
                    mc.std_error[n].into(),
                    closed.re.into(),
                    closed.im.into(),
                    closed.norm().into(),
                ]);
            }
        }
        data.into_iter().for_each(|r| table.push(r));
        written.push(table.write(&dir, &format!("fig5_fcf_{name}.csv"))?);
    }
    Ok(written)
}

fn write_gnuplot(fig: Figure, cfg: &ExperimentConfig, csvs: &[PathBuf]) -> Result<PathBuf> {
    let mut script = String::from("set datafile separator ','\nset key autotitle columnhead\nset grid\n");
    let (xlabel, ylabel) = match fig {
        Figure::Fig2 => ("f (Hz)", "|SCF|"),
        Figure::Fig3 | Figure::Fig5 => ("nu (Hz)", "|FCF|"),
        Figure::Fig4 => ("tau (s)", "PDP (1/s)"),
    };
    script.push_str(&format!("set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"));
    for csv in csvs {
        let name = csv.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if name.contains("coherence") || name.contains("moments") {
            continue;
        }
        let text = std::fs::read_to_string(csv)?;
        let header: Vec<&str> = text.lines().nth(1).unwrap_or_default().split(',').collect();
        let wanted: Vec<usize> = header
            .iter()
            .enumerate()
            .filter(|(_, h)| h.ends_with("_abs") || h.ends_with("_mc") || h.ends_with("_closed"))
            .map(|(i, _)| i + 1)
            .collect();
        let plots: Vec<String> = wanted.iter().map(|c| format!("'{name}' using 1:{c} with lines")).collect();
        script.push_str(&format!("set title '{name}'\nplot {}\npause -1\n", plots.join(", \\\n     ")));
    }
    let path = cfg.out_dir().join(format!("{}.gp", fig.name()));
    std::fs::write(&path, script)?;
    Ok(path)
}

/// Apply the shared figure flags as config overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureFlags {
    pub seed: Option<u64>,
    pub scatterers: Option<usize>,
    pub realizations: Option<usize>,
    pub out: Option<PathBuf>,
    pub gnuplot: bool,
    pub paper_scale: bool,
    pub antennas: Option<Vec<usize>>,
}

impl FigureFlags {
    pub fn overrides(&self, fig: Figure) -> Vec<String> {
        let mut o = Vec::new();
        if let Some(s) = self.seed {
            o.push(format!("seed={s}"));
        }
        if let Some(n) = self.scatterers {
            o.push(format!("evaluation.scatterers={n}"));
        }
        if let Some(n) = self.realizations {
            o.push(format!("evaluation.realizations={n}"));
        }
        if let Some(d) = &self.out {
            o.push(format!("output.dir={}", toml::Value::String(d.display().to_string())));
        }
        if self.gnuplot {
            o.push("output.gnuplot=true".into());
        }
        if self.paper_scale && matches!(fig, Figure::Fig4 | Figure::Fig5) {
            o.push("generator.n_paths=1000".into());
        }
        if let Some(a) = &self.antennas {
            let list: Vec<String> = a.iter().map(usize::to_string).collect();
            o.push(format!("evaluation.rx=[{}]", list.join(",")));
        }
        o
    }
}

/// Layer defaults, an optional config file, explicit overrides and flags.
pub fn figure_config(fig: Figure, file: Option<&std::path::Path>, sets: &[String], flags: &FigureFlags) -> Result<ExperimentConfig> {
    let mut overrides = sets.to_vec();
    overrides.extend(flags.overrides(fig));
    let cfg = ExperimentConfig::from_file(&fig.defaults(), file, &overrides)?;
    if cfg.evaluation.method != Method::Closed {
        log::info!("figure runners always emit every method column; evaluation.method is ignored");
    }
    Ok(cfg)
}
