//! Generic evaluation of one library operation per call, written as CSV.

use std::path::PathBuf;

use num_complex::Complex64;

use super::config::{ExperimentConfig, Method};
use super::csv::{Cell, CsvTable};
use crate::correlation::{scf_closed, stfcf, Axis, CorrelationQuery};
use crate::delay_stats::{coherence_constant_detail, composite_pdp, delay_moments, Orientation};
use crate::error::{Error, Result};
use crate::geometry::{element_offset, offset_delay, AntennaIndex};
use crate::montecarlo::{
    auto_bins, empirical_delay_moments, empirical_fcf, empirical_pdp, estimate_stfcf, Bins, EstimatorConfig,
};
use crate::stochastic::{normalized_gains, SeedSpec, VonMises};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalKind {
    Scf,
    Fcf,
    Stfcf,
    Pdp,
    Stats,
    Coherence,
}

impl EvalKind {
    pub fn name(&self) -> &'static str {
        match self {
            EvalKind::Scf => "scf",
            EvalKind::Fcf => "fcf",
            EvalKind::Stfcf => "stfcf",
            EvalKind::Pdp => "pdp",
            EvalKind::Stats => "stats",
            EvalKind::Coherence => "coherence",
        }
    }
}

/// Options that only the coherence evaluation reads.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoherenceOptions {
    /// Concentration; defaults to the first path's.
    pub kappa: Option<f64>,
    /// Rx tilt relative to the mean AOA, `β_R − m`; the worst case when absent.
    pub tilt: Option<f64>,
}

fn method_tag(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed-form",
        Method::Quadrature => "quadrature",
        Method::Mc => "monte-carlo",
    }
}

fn estimator(cfg: &ExperimentConfig, tag: u64) -> EstimatorConfig {
    let mut est = EstimatorConfig::new(cfg.evaluation.realizations, SeedSpec::new(cfg.seed).derive(tag));
    est.n_scatterers_override = cfg.evaluation.scatterers;
    est
}

fn unsupported(kind: EvalKind, m: Method) -> Error {
    Error::Usage(format!("eval {} has no {} method", kind.name(), method_tag(m)))
}

fn complex_cells(v: Complex64) -> [Cell; 3] {
    [v.re.into(), v.im.into(), v.norm().into()]
}

/// Run one evaluation and write `eval_<kind>.csv`.
pub fn run_eval(kind: EvalKind, cfg: &ExperimentConfig, coherence: CoherenceOptions) -> Result<PathBuf> {
    let table = match kind {
        EvalKind::Scf => eval_scf(cfg)?,
        EvalKind::Fcf => eval_fcf(cfg)?,
        EvalKind::Stfcf => eval_stfcf(cfg)?,
        EvalKind::Pdp => eval_pdp(cfg)?,
        EvalKind::Stats => eval_stats(cfg)?,
        EvalKind::Coherence => eval_coherence(cfg, coherence)?,
    };
    table.write(&cfg.out_dir(), &format!("eval_{}.csv", kind.name()))
}

fn pair_query(cfg: &ExperimentConfig) -> (usize, usize, usize, usize) {
    let ev = &cfg.evaluation;
    let q = ev.rx[0];
    let q2 = ev.rx_partner.unwrap_or(q);
    (ev.tx, q, ev.tx_partner.unwrap_or(ev.tx), q2)
}

fn eval_scf(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let array = cfg.array_config();
    let paths = cfg.build_paths()?;
    let (p, q, p2, q2) = pair_query(cfg);
    let m = cfg.evaluation.method;
    let mut cols = vec!["f_hz", "re", "im", "abs"];
    if m == Method::Mc {
        cols.push("se");
    }
    let mut table = CsvTable::new(&cfg.hash(), cfg.seed, method_tag(m), &cols);
    let est = estimator(cfg, 600);
    for f in cfg.evaluation.f.samples()? {
        let query = CorrelationQuery::new(p, q).with_partner(p2, q2).with_lags(0.0, f, 0.0);
        let mut row: Vec<Cell> = vec![f.into()];
        match m {
            Method::Closed => {
                if p != p2 && array.m_t > 1 {
                    return Err(Error::Usage("the closed-form SCF covers receive-side lags only; use quadrature".into()));
                }
                let delta = element_offset(&array, AntennaIndex::rx(q2))? - element_offset(&array, AntennaIndex::rx(q))?;
                let gains = normalized_gains(&paths)?;
                let mut v = Complex64::new(0.0, 0.0);
                for (path, c) in paths.iter().zip(gains) {
                    v += c * c * scf_closed(&path.aoa, f, delta, array.beta_r, &array)?;
                }
                row.extend(complex_cells(v));
            }
            Method::Quadrature => row.extend(complex_cells(stfcf(&array, &paths, &query)?)),
            Method::Mc => {
                let e = estimate_stfcf(&array, &paths, &query, &est)?;
                row.extend(complex_cells(e.value));
                row.push(e.std_error.into());
            }
        }
        table.push(row);
    }
    Ok(table)
}

fn eval_fcf(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let array = cfg.array_config();
    let paths = cfg.build_paths()?;
    let ev = &cfg.evaluation;
    let nus = ev.nu.samples()?;
    let m = ev.method;
    let mut columns = vec!["nu_hz".to_string()];
    for q in &ev.rx {
        columns.extend([format!("a{q}_re"), format!("a{q}_im"), format!("a{q}_abs")]);
        if m == Method::Mc {
            columns.push(format!("a{q}_se"));
        }
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = CsvTable::new(&cfg.hash(), cfg.seed, method_tag(m), &cols);
    let mut data: Vec<Vec<Cell>> = nus.iter().map(|&nu| vec![nu.into()]).collect();
    for (j, &q) in ev.rx.iter().enumerate() {
        let ant = AntennaIndex::rx(q);
        match m {
            Method::Closed => {
                for (row, &nu) in data.iter_mut().zip(&nus) {
                    row.extend(complex_cells(crate::correlation::fcf(&array, &paths, ant, AntennaIndex::tx(ev.tx), nu)?));
                }
            }
            Method::Quadrature => {
                for (row, &nu) in data.iter_mut().zip(&nus) {
                    let query = CorrelationQuery::new(ev.tx, q).with_lags(0.0, 0.0, nu);
                    row.extend(complex_cells(stfcf(&array, &paths, &query)?));
                }
            }
            Method::Mc => {
                let e = empirical_fcf(&array, &paths, ant, Axis::new("nu", "Hz", nus.clone()), &estimator(cfg, 700 + j as u64))?;
                for (n, row) in data.iter_mut().enumerate() {
                    row.extend(complex_cells(e.grid.values[n]));
                    row.push(e.std_error[n].into());
                }
            }
        }
    }
    data.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn eval_stfcf(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let array = cfg.array_config();
    let paths = cfg.build_paths()?;
    let ev = &cfg.evaluation;
    let (p, q, p2, q2) = pair_query(cfg);
    let m = ev.method;
    if m == Method::Closed {
        return Err(unsupported(EvalKind::Stfcf, m));
    }
    let mut cols = vec!["f_hz", "nu_hz", "re", "im", "abs"];
    if m == Method::Mc {
        cols.push("se");
    }
    let mut table = CsvTable::new(&cfg.hash(), cfg.seed, method_tag(m), &cols);
    let est = estimator(cfg, 800);
    for f in ev.f.samples()? {
        for nu in ev.nu.samples()? {
            let query = CorrelationQuery::new(p, q).with_partner(p2, q2).with_lags(ev.dt, f, nu);
            let mut row: Vec<Cell> = vec![f.into(), nu.into()];
            if m == Method::Mc {
                let e = estimate_stfcf(&array, &paths, &query, &est)?;
                row.extend(complex_cells(e.value));
                row.push(e.std_error.into());
            } else {
                row.extend(complex_cells(stfcf(&array, &paths, &query)?));
            }
            table.push(row);
        }
    }
    Ok(table)
}

fn eval_pdp(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let array = cfg.array_config();
    let paths = cfg.build_paths()?;
    let ev = &cfg.evaluation;
    let m = ev.method;
    if m == Method::Quadrature {
        return Err(unsupported(EvalKind::Pdp, m));
    }
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
        columns.push(format!("a{q}"));
        if m == Method::Mc {
            columns.push(format!("a{q}_se"));
        }
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = CsvTable::new(&cfg.hash(), cfg.seed, method_tag(m), &cols);
    let mut data: Vec<Vec<Cell>> = centers.iter().map(|&t| vec![t.into()]).collect();
    for (j, &q) in ev.rx.iter().enumerate() {
        let ant = AntennaIndex::rx(q);
        if m == Method::Mc {
            let e = empirical_pdp(&array, &paths, ant, &Bins::Centers(centers.clone()), &estimator(cfg, 900 + j as u64))?;
            for (i, row) in data.iter_mut().enumerate() {
                row.extend([e.curve.density[i].into(), e.std_error[i].into()]);
            }
        } else {
            let c = composite_pdp(&array, &paths, ant, &centers)?;
            for (i, row) in data.iter_mut().enumerate() {
                row.push(c.density[i].into());
            }
        }
    }
    data.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn eval_stats(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let array = cfg.array_config();
    let paths = cfg.build_paths()?;
    let ev = &cfg.evaluation;
    let m = ev.method;
    let mut cols = vec!["antenna", "tau_q_s", "mean_s", "rms_s", "literal_rms_s", "literal_negative_terms"];
    match m {
        Method::Closed => {}
        Method::Mc => cols.extend(["mean_mc_s", "mean_mc_se_s", "rms_mc_s", "rms_mc_se_s"]),
        Method::Quadrature => return Err(unsupported(EvalKind::Stats, m)),
    }
    let mut table = CsvTable::new(&cfg.hash(), cfg.seed, method_tag(m), &cols);
    for (j, &q) in ev.rx.iter().enumerate() {
        let ant = AntennaIndex::rx(q);
        let d = delay_moments(&array, &paths, ant)?;
        let mut row: Vec<Cell> = vec![
            q.into(),
            offset_delay(&array, ant)?.into(),
            d.mean.into(),
            d.rms.into(),
            d.literal_rms.unwrap_or(f64::NAN).into(),
            d.literal_negative_terms.into(),
        ];
        if m == Method::Mc {
            let e = empirical_delay_moments(&array, &paths, ant, &estimator(cfg, 1000 + j as u64))?;
            row.extend([e.mean.into(), e.mean_std_error.into(), e.rms.into(), e.rms_std_error.into()]);
        }
        table.push(row);
    }
    Ok(table)
}

fn eval_coherence(cfg: &ExperimentConfig, opts: CoherenceOptions) -> Result<CsvTable> {
    let array = cfg.array_config();
    let ev = &cfg.evaluation;
    if ev.method != Method::Closed {
        return Err(unsupported(EvalKind::Coherence, ev.method));
    }
    let base = cfg.build_paths()?.first().map(|p| p.aoa).unwrap_or_else(VonMises::uniform);
    let kappa = opts.kappa.unwrap_or(base.kappa());
    let d = VonMises::new(0.0, kappa)?;
    let orientation = match opts.tilt {
        Some(t) => Orientation::Tilt(t),
        None => Orientation::Worst,
    };
    let c = coherence_constant_detail(&d, ev.rho, orientation)?;
    let mut table = CsvTable::new(
        &cfg.hash(),
        cfg.seed,
        "closed-form",
        &["label", "delta_q_m", "constant_hz_m", "bandwidth_hz", "kappa", "rho", "cos_orientation"],
    );
    let mut rows: Vec<(String, f64)> = vec![
        ("two-antenna-reference".into(), array.delta_r / 2.0),
        ("array-edge-nominal".into(), array.m_r as f64 * array.delta_r / 2.0),
    ];
    for &q in &ev.rx {
        rows.push((format!("antenna-{q}"), element_offset(&array, AntennaIndex::rx(q))?));
    }
    for (label, delta) in rows {
        let bw = if delta == 0.0 { f64::INFINITY } else { c.value / delta.abs() };
        table.push(vec![
            label.into(),
            delta.into(),
            c.value.into(),
            bw.into(),
            kappa.into(),
            ev.rho.into(),
            c.cos_orientation.into(),
        ]);
    }
    Ok(table)
}
