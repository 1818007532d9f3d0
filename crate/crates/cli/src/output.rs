//! Tabular outputs: CSV with 17 significant digits plus a JSON mirror, and
//! the run manifest with per-file SHA-256 checksums.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// `{:.16e}` keeps 17 significant digits, enough to round-trip any f64.
pub fn format_num(x: f64) -> String {
    if x.is_finite() {
        // adding 0.0 turns -0.0 into 0.0
        format!("{:.16e}", x + 0.0)
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // non-finite values have no JSON number form
            Cell::Num(v) if v.is_finite() => json!(v + 0.0),
            Cell::Num(v) => json!(format_num(*v)),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// Deterministic description of a run, embedded in every JSON mirror. The
/// output directory is left out of `config` so that reruns into different
/// directories produce identical files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunInfo {
    pub command: String,
    pub toolkit_version: String,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub run: RunInfo,
    pub output_dir: String,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<OutputRecord>,
}

/// Named tables produced by one command, in emission order.
#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub tables: Vec<(String, Table)>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, table: Table) {
        self.tables.push((name.to_string(), table));
    }

    pub fn get(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// File name and contents of every CSV and JSON mirror.
    pub fn render(&self, run: &RunInfo) -> Vec<(String, Vec<u8>)> {
        let mut files = Vec::new();
        for (name, table) in &self.tables {
            files.push((format!("{name}.csv"), table.to_csv().into_bytes()));
            let rows: Vec<Value> = table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
            let doc = json!({ "run": run, "columns": table.columns, "rows": rows });
            let mut text = serde_json::to_string_pretty(&doc).expect("json");
            text.push('\n');
            files.push((format!("{name}.json"), text.into_bytes()));
        }
        files
    }

    /// Writes every file plus `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path, run: RunInfo, wall_clock_seconds: f64) -> CliResult<RunManifest> {
        std::fs::create_dir_all(dir)?;
        let mut outputs = Vec::new();
        for (file, bytes) in self.render(&run) {
            std::fs::write(dir.join(&file), &bytes)?;
            outputs.push(OutputRecord { file, sha256: hex::encode(Sha256::digest(&bytes)), bytes: bytes.len() });
        }
        let manifest = RunManifest { run, output_dir: dir.display().to_string(), wall_clock_seconds, outputs };
        let mut text = serde_json::to_string_pretty(&manifest).expect("json");
        text.push('\n');
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(format_num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_num(f64::INFINITY), "inf");
        assert_eq!(format_num(-0.0), "0.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1usize.into(), 0.5.into()]);
        assert_eq!(t.to_csv(), "a,b\n1,5.0000000000000000e-1\n");
    }
}
