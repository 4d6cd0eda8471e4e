//! CSV output: a `# config-hash=<hex> seed=<n> method=<tag>` line, a header
//! row, then data with numbers written to 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::Num(x) if x.is_nan() => "nan".into(),
        Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
        Cell::Num(x) => format!("{x:.16e}"),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

/// An in-memory table written in one go.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub config_hash: String,
    pub seed: u64,
    pub method: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(config_hash: &str, seed: u64, method: &str, columns: &[&str]) -> Self {
        Self {
            config_hash: config_hash.to_string(),
            seed,
            method: method.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# config-hash={} seed={} method={}", self.config_hash, self.seed, self.method);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_cell).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Write to `dir/name`, creating `dir` if needed.
    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, self.render())?;
        Ok(path)
    }
}

/// Parsed numeric view of a CSV written by [`CsvTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub meta: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedCsv {
    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let meta = lines.next()?.strip_prefix("# ")?.to_string();
        let columns = lines.next()?.split(',').map(str::to_string).collect();
        let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
        Some(Self { meta, columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r.get(i)?.parse().ok()).collect()
    }

    pub fn text_column(&self, name: &str) -> Option<Vec<String>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r.get(i).cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_precision() {
        let mut t = CsvTable::new("0123456789abcdef", 7, "closed-form", &["x", "label", "n"]);
        t.push(vec![0.1.into(), "a".into(), 3usize.into()]);
        t.push(vec![(-1.0 / 3.0).into(), "b".into(), 4usize.into()]);
        let text = t.render();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# config-hash=0123456789abcdef seed=7 method=closed-form"));
        assert_eq!(lines.next(), Some("x,label,n"));
        assert_eq!(lines.next(), Some("1.0000000000000001e-1,a,3"));
        let parsed = ParsedCsv::parse(&text).unwrap();
        assert_eq!(parsed.column("x").unwrap()[1], -1.0 / 3.0);
        assert_eq!(parsed.text_column("label").unwrap(), vec!["a", "b"]);
    }
}
