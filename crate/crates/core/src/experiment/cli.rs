//! Command-line front end used by the `gbsm` binary.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::config::{ExperimentConfig, Method};
use super::eval::{run_eval, CoherenceOptions, EvalKind};
use super::figures::{figure_config, Figure, FigureFlags};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "gbsm", version, about = "Array-variant channel statistics for large antenna arrays")]
struct Cli {
    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// |SCF| against frequency for a two-element array and several κ.
    Fig2(FigureArgs),
    /// Path-level |FCF| at antennas 50, 75 and 100.
    Fig3(FigureArgs),
    /// Array-variant PDP for two mean-AOA scenarios.
    Fig4(FigureArgs),
    /// Array-variant FCF for two mean-AOA scenarios.
    Fig5(FigureArgs),
    /// Evaluate one quantity on the configured grid.
    Eval(Box<EvalArgs>),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML experiment config layered over the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set array.m_r=64`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scatterers per path for Monte Carlo columns.
    #[arg(long)]
    scatterers: Option<usize>,
    #[arg(long)]
    realizations: Option<usize>,
    /// Output directory (default: $GBSM_OUT_DIR, then the working directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rx antennas, comma separated.
    #[arg(long, value_delimiter = ',')]
    antennas: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[command(flatten)]
    common: Common,
    /// Also write a gnuplot script.
    #[arg(long)]
    gnuplot: bool,
    /// Use 10^3 delays instead of 10^2 (figures 4 and 5).
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Scf,
    Fcf,
    Stfcf,
    Pdp,
    Stats,
    Coherence,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Quadrature,
    Mc,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Tx antenna.
    #[arg(long)]
    tx: Option<usize>,
    /// Second Rx antenna for spatial lags.
    #[arg(long)]
    partner: Option<usize>,
    /// Second Tx antenna for spatial lags.
    #[arg(long)]
    tx_partner: Option<usize>,
    /// Concentration of the (single) explicit path or of the coherence query.
    #[arg(long)]
    kappa: Option<f64>,
    /// `β_R − m` for the coherence query; worst case when omitted.
    #[arg(long, allow_negative_numbers = true)]
    tilt: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Single frequency lag, Hz.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["nu_min", "nu_max", "nu_points"])]
    nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["nu_max", "nu_points"])]
    nu_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["nu_min", "nu_points"])]
    nu_max: Option<f64>,
    #[arg(long, requires_all = ["nu_min", "nu_max"])]
    nu_points: Option<usize>,
    /// Single frequency offset from the carrier, Hz.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["f_min", "f_max", "f_points"])]
    f: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["f_max", "f_points"])]
    f_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["f_min", "f_points"])]
    f_max: Option<f64>,
    #[arg(long, requires_all = ["f_min", "f_max"])]
    f_points: Option<usize>,
    /// Time lag, s.
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
}

fn common_overrides(c: &Common) -> Vec<String> {
    let flags = FigureFlags {
        seed: c.seed,
        scatterers: c.scatterers,
        realizations: c.realizations,
        out: c.out.clone(),
        gnuplot: false,
        paper_scale: false,
        antennas: c.antennas.clone(),
    };
    flags.overrides(Figure::Fig2)
}

fn grid(name: &str, single: Option<f64>, min: Option<f64>, max: Option<f64>, points: Option<usize>) -> Option<String> {
    match (single, min, max, points) {
        (Some(x), ..) => Some(format!("evaluation.{name}={{min={x:e}, max={x:e}, points=1}}")),
        (None, Some(a), Some(b), Some(n)) => Some(format!("evaluation.{name}={{min={a:e}, max={b:e}, points={n}}}")),
        _ => None,
    }
}

fn eval_config(a: &EvalArgs) -> Result<ExperimentConfig> {
    let mut o = a.common.sets.clone();
    o.extend(common_overrides(&a.common));
    if let Some(m) = a.method {
        let m = match m {
            MethodArg::Closed => "closed",
            MethodArg::Quadrature => "quadrature",
            MethodArg::Mc => "mc",
        };
        o.push(format!("evaluation.method=\"{m}\""));
    }
    let scalar = [
        ("tx", a.tx.map(|x| x.to_string())),
        ("rx_partner", a.partner.map(|x| x.to_string())),
        ("tx_partner", a.tx_partner.map(|x| x.to_string())),
        ("rho", a.rho.map(|x| format!("{x:e}"))),
        ("dt", a.dt.map(|x| format!("{x:e}"))),
        ("tau_points", a.tau_points.map(|x| x.to_string())),
    ];
    for (k, v) in scalar {
        if let Some(v) = v {
            o.push(format!("evaluation.{k}={v}"));
        }
    }
    o.extend(grid("nu", a.nu, a.nu_min, a.nu_max, a.nu_points));
    o.extend(grid("f", a.f, a.f_min, a.f_max, a.f_points));
    let mut cfg = ExperimentConfig::from_file(&ExperimentConfig::default(), a.common.config.as_deref(), &o)?;
    if let (Some(k), false) = (a.kappa, matches!(a.kind, Kind::Coherence)) {
        if cfg.generator.is_some() {
            return Err(Error::Usage("--kappa applies to explicit paths, not to a generator".into()));
        }
        cfg.paths.iter_mut().for_each(|p| p.kappa = k);
        cfg.validate()?;
    }
    if cfg.evaluation.method == Method::Mc && cfg.evaluation.realizations < 2 {
        log::warn!("a single realization gives no standard error");
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<Vec<PathBuf>> {
    let (which, a) = match cli.command {
        Command::Fig2(a) => (Figure::Fig2, a),
        Command::Fig3(a) => (Figure::Fig3, a),
        Command::Fig4(a) => (Figure::Fig4, a),
        Command::Fig5(a) => (Figure::Fig5, a),
        Command::Eval(a) => {
            let cfg = eval_config(&a)?;
            let kind = match a.kind {
                Kind::Scf => EvalKind::Scf,
                Kind::Fcf => EvalKind::Fcf,
                Kind::Stfcf => EvalKind::Stfcf,
                Kind::Pdp => EvalKind::Pdp,
                Kind::Stats => EvalKind::Stats,
                Kind::Coherence => EvalKind::Coherence,
            };
            let opts = CoherenceOptions { kappa: a.kappa, tilt: a.tilt };
            return Ok(vec![run_eval(kind, &cfg, opts)?]);
        }
    };
    let flags = FigureFlags {
        seed: a.common.seed,
        scatterers: a.common.scatterers,
        realizations: a.common.realizations,
        out: a.common.out.clone(),
        gnuplot: a.gnuplot,
        paper_scale: a.paper_scale,
        antennas: a.common.antennas.clone(),
    };
    let cfg = figure_config(which, a.common.config.as_deref(), &a.common.sets, &flags)?;
    which.run(&cfg)
}

/// Parse `args`, run, print written files; exit 0 iff everything was written.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match dispatch(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e @ Error::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
