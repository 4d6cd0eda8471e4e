//! Experiment configuration files.
//!
//! Configs are TOML with the sections `[array]`, `[[paths]]` or
//! `[generator]`, `[evaluation]` and `[output]`, plus a top-level `seed`.
//! Any key can be overridden with `section.key=value`, where the value is
//! parsed as a TOML value (bare words fall back to strings). The config hash
//! is taken over the canonical TOML serialization after all overrides.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{ArrayConfig, EllipsePath, SPEED_OF_LIGHT};
use crate::stochastic::{ClusterSpec, SeedSpec, VonMises};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GBSM_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub array: ArraySection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSection>,
    #[serde(default)]
    pub evaluation: EvaluationSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_seed() -> u64 {
    1
}

/// Array geometry. Spacings are in carrier wavelengths, angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArraySection {
    pub f0: f64,
    pub m_t: usize,
    pub m_r: usize,
    pub delta_t: f64,
    pub delta_r: f64,
    pub beta_t: f64,
    pub beta_r: f64,
    pub v: f64,
    pub alpha_v: f64,
}

impl Default for ArraySection {
    fn default() -> Self {
        Self {
            f0: 2e9,
            m_t: 1,
            m_r: 100,
            delta_t: 0.5,
            delta_r: 0.5,
            beta_t: 0.0,
            beta_r: 0.0,
            v: 0.0,
            alpha_v: 0.0,
        }
    }
}

/// One explicit path. `tau0` in seconds, `mu` in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    pub tau0: f64,
    #[serde(default = "unit")]
    pub gain: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_scatterers")]
    pub scatterers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

fn unit() -> f64 {
    1.0
}

fn default_scatterers() -> usize {
    100
}

/// Random cluster ensemble with exponential delays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub n_paths: usize,
    #[serde(default = "default_scatterers")]
    pub scatterers: usize,
    pub tau_rms: f64,
    #[serde(default)]
    pub kappa_min: f64,
    #[serde(default = "ten")]
    pub kappa_max: f64,
    #[serde(default)]
    pub mean_min: f64,
    #[serde(default = "full_circle")]
    pub mean_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

fn ten() -> f64 {
    10.0
}

fn full_circle() -> f64 {
    TAU
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Quadrature,
    Mc,
}

/// Uniform grid `[min, max]` with `points` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self { min: x, max: x, points: 1 }
    }

    pub fn samples(&self) -> Result<Vec<f64>> {
        match self.points {
            0 => Err(Error::Config("grids need at least one point".into())),
            1 if self.min == self.max => Ok(vec![self.min]),
            1 => Err(Error::Config(format!("a one-point grid needs min = max, got [{}, {}]", self.min, self.max))),
            n => Ok((0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationSection {
    pub method: Method,
    /// Rx antennas to evaluate.
    pub rx: Vec<usize>,
    /// Tx antenna.
    pub tx: usize,
    /// Second Rx antenna for spatial correlations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx_partner: Option<usize>,
    /// Second Tx antenna for spatial correlations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_partner: Option<usize>,
    /// Concentrations swept by the single-path figures.
    pub kappas: Vec<f64>,
    /// Frequency offsets from the carrier, Hz.
    pub f: Grid,
    /// Frequency lags, Hz.
    pub nu: Grid,
    /// Time lag, s.
    pub dt: f64,
    /// Histogram or delay-axis points.
    pub tau_points: usize,
    /// Coherence threshold.
    pub rho: f64,
    pub realizations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scatterers: Option<usize>,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        Self {
            method: Method::Closed,
            rx: vec![1],
            tx: 1,
            rx_partner: None,
            tx_partner: None,
            kappas: vec![0.0, 5.0, 10.0],
            f: Grid::single(0.0),
            nu: Grid::single(0.0),
            dt: 0.0,
            tau_points: 512,
            rho: 0.5,
            realizations: 100,
            scatterers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Output directory; falls back to `GBSM_OUT_DIR`, then `.`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSVs.
    pub gnuplot: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            array: ArraySection::default(),
            paths: vec![PathSection {
                tau0: 0.0,
                gain: 1.0,
                kappa: 0.0,
                mu: 0.0,
                scatterers: default_scatterers(),
                k: None,
            }],
            generator: None,
            evaluation: EvaluationSection::default(),
            output: OutputSection::default(),
        }
    }
}

/// Parse a `key=value` override into a dotted key and a TOML value.
fn parse_override(spec: &str) -> Result<(Vec<String>, toml::Value)> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Usage(format!("override '{spec}' is not of the form section.key=value")))?;
    let keys: Vec<String> = key.trim().split('.').map(str::to_string).collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Usage(format!("override '{spec}' has an empty key")));
    }
    let raw = raw.trim();
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((keys, value))
}

fn apply_override(table: &mut toml::Table, keys: &[String], value: toml::Value) -> Result<()> {
    let (last, parents) = keys.split_last().expect("non-empty key");
    let mut cur = table;
    for k in parents {
        let entry = cur.entry(k.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = match entry {
            toml::Value::Table(t) => t,
            // `paths.0.kappa` style access into the path list
            toml::Value::Array(_) => return Err(Error::Usage(format!("cannot override inside the array '{k}'; edit the config file"))),
            _ => return Err(Error::Usage(format!("'{k}' is not a section"))),
        };
    }
    cur.insert(last.clone(), value);
    Ok(())
}

impl ExperimentConfig {
    /// Parse TOML text on top of `base`, then apply overrides.
    pub fn layered(base: &ExperimentConfig, text: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(&toml::to_string(base).map_err(|e| Error::Config(e.to_string()))?)
            .map_err(|e| Error::Config(e.to_string()))?;
        if let Some(text) = text {
            let file: toml::Table = toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
            // a file that lists paths replaces the base generator and vice versa
            if file.contains_key("paths") {
                table.remove("generator");
            }
            if file.contains_key("generator") {
                table.remove("paths");
            }
            for (k, v) in file {
                match (table.get_mut(&k), v) {
                    (Some(toml::Value::Table(dst)), toml::Value::Table(src)) => dst.extend(src),
                    (_, v) => {
                        table.insert(k, v);
                    }
                }
            }
        }
        for spec in overrides {
            let (keys, value) = parse_override(spec)?;
            if keys[0] == "generator" {
                table.remove("paths");
            }
            apply_override(&mut table, &keys, value)?;
        }
        let cfg: ExperimentConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(base: &ExperimentConfig, path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = path.map(std::fs::read_to_string).transpose()?;
        Self::layered(base, text.as_deref(), overrides)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.paths.is_empty(), self.generator.is_some()) {
            (true, false) => return Err(Error::Config("config needs either [[paths]] or [generator]".into())),
            (false, true) => return Err(Error::Config("config has both [[paths]] and [generator]; keep one".into())),
            _ => {}
        }
        let cfg = self.array_config();
        cfg.validate()?;
        let ev = &self.evaluation;
        for &q in ev.rx.iter().chain(ev.rx_partner.iter()) {
            if q < 1 || q > cfg.m_r {
                return Err(Error::Config(format!("Rx antenna {q} is outside 1..={}", cfg.m_r)));
            }
        }
        for &p in std::iter::once(&ev.tx).chain(ev.tx_partner.iter()) {
            if p < 1 || p > cfg.m_t {
                return Err(Error::Config(format!("Tx antenna {p} is outside 1..={}", cfg.m_t)));
            }
        }
        if ev.realizations < 1 {
            return Err(Error::Config("evaluation.realizations must be at least 1".into()));
        }
        if !(ev.rho > 0.0 && ev.rho < 1.0) {
            return Err(Error::Config(format!("evaluation.rho must lie in (0, 1), got {}", ev.rho)));
        }
        ev.f.samples()?;
        ev.nu.samples()?;
        if let Some(g) = &self.generator {
            self.cluster_spec(g).validate()?;
        }
        for p in &self.paths {
            VonMises::new(p.mu, p.kappa)?;
        }
        Ok(())
    }

    pub fn array_config(&self) -> ArrayConfig {
        let a = &self.array;
        let lambda = SPEED_OF_LIGHT / a.f0;
        ArrayConfig::new(a.f0)
            .with_tx(a.m_t, a.delta_t * lambda, a.beta_t)
            .with_rx(a.m_r, a.delta_r * lambda, a.beta_r)
            .with_motion(a.v, a.alpha_v)
    }

    fn cluster_spec(&self, g: &GeneratorSection) -> ClusterSpec {
        ClusterSpec {
            n_paths: g.n_paths,
            n_scatterers: g.scatterers,
            tau_rms: g.tau_rms,
            kappa_range: (g.kappa_min, g.kappa_max),
            mean_range: (g.mean_min, g.mean_max),
            k_ell: g.k,
        }
    }

    /// Explicit paths, or the generator's ensemble drawn from `seed`.
    pub fn build_paths(&self) -> Result<Vec<EllipsePath>> {
        if let Some(g) = &self.generator {
            return self.cluster_spec(g).generate(SeedSpec::new(self.seed).derive(TAG_GENERATOR));
        }
        self.paths
            .iter()
            .map(|p| {
                let mut path = EllipsePath::new(p.tau0, p.gain, VonMises::new(p.mu, p.kappa)?, p.scatterers);
                path.k_ell = p.k;
                path.validate()?;
                Ok(path)
            })
            .collect()
    }

    /// Output directory from the config, `GBSM_OUT_DIR`, or the working directory.
    pub fn out_dir(&self) -> PathBuf {
        self.output
            .dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    /// First 16 hex digits of the SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        // where files go does not change what is computed
        canonical.output = OutputSection::default();
        let text = toml::to_string(&canonical).unwrap_or_default();
        Sha256::digest(text.as_bytes())
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

const TAG_GENERATOR: u64 = 100;
