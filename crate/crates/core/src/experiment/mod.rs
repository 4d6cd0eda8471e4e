//! Experiment plumbing: configuration files, CSV output, figure runners and
//! the generic `eval` entry points behind the `gbsm` binary.

pub mod cli;
pub mod config;
pub mod csv;
pub mod eval;
pub mod figures;

pub use config::{ExperimentConfig, Method};
pub use csv::{CsvTable, ParsedCsv};
pub use eval::{run_eval, CoherenceOptions, EvalKind};
pub use figures::{figure_config, Figure, FigureFlags};
