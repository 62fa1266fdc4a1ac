//! Experiment reports and their CSV / JSON serialisation.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value as Json};

use crate::error::{config_err, Result};

/// Bumped whenever a column is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    /// Floats carry 17 significant digits so that they parse back exactly.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Cell::Int(v) => Json::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Json::Null, Json::Number),
            Cell::Text(s) => Json::from(s.as_str()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// A long-format table: one row per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match the header"
        );
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of `value` over the rows where every `(column, text)` filter matches.
    pub fn select(&self, value: &str, filters: &[(&str, &str)]) -> Vec<f64> {
        let Some(v) = self.column(value) else {
            return Vec::new();
        };
        let idx: Vec<(usize, &str)> = filters
            .iter()
            .filter_map(|(c, t)| self.column(c).map(|i| (i, *t)))
            .collect();
        if idx.len() != filters.len() {
            return Vec::new();
        }
        self.rows
            .iter()
            .filter(|r| idx.iter().all(|(i, t)| r[*i].render() == *t))
            .filter_map(|r| r[v].as_f64())
            .collect()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["schema_version".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        let version = SCHEMA_VERSION.to_string();
        for row in &self.rows {
            let mut rec = vec![version.clone()];
            rec.extend(row.iter().map(Cell::render));
            w.write_record(&rec)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }

    fn to_json(&self) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Json> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(r.iter().map(Cell::to_json))
                        .collect();
                    Json::Object(obj)
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub config: Json,
    pub records: Table,
    pub aggregates: Table,
    pub wall_clock_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFiles {
    pub records_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub json: PathBuf,
}

impl ExperimentReport {
    pub fn new<C: Serialize>(
        experiment: &str,
        seed: u64,
        config: &C,
        records: Table,
        aggregates: Table,
    ) -> Result<Self> {
        Ok(Self {
            experiment: experiment.to_owned(),
            seed,
            config: serde_json::to_value(config)?,
            records,
            aggregates,
            wall_clock_ms: 0,
        })
    }

    pub fn to_json(&self) -> Json {
        serde_json::json!({
            "experiment": self.experiment,
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "config": self.config,
            "wall_clock_ms": self.wall_clock_ms as u64,
            "records": self.records.to_json(),
            "aggregates": self.aggregates.to_json(),
        })
    }

    /// Writes `<experiment>.csv`, `<experiment>_summary.csv` and `<experiment>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<WrittenFiles> {
        if dir.exists() && !dir.is_dir() {
            return config_err(format!("{} is not a directory", dir.display()));
        }
        fs::create_dir_all(dir)?;
        let files = WrittenFiles {
            records_csv: dir.join(format!("{}.csv", self.experiment)),
            summary_csv: dir.join(format!("{}_summary.csv", self.experiment)),
            json: dir.join(format!("{}.json", self.experiment)),
        };
        fs::write(&files.records_csv, self.records.to_csv()?)?;
        fs::write(&files.summary_csv, self.aggregates.to_csv()?)?;
        let mut json = serde_json::to_vec_pretty(&self.to_json())?;
        json.push(b'\n');
        fs::write(&files.json, json)?;
        Ok(files)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_roundtrip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, -2.5e10, 0.0] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["variant", "rep", "fdp"]);
        t.push(vec!["oracle".into(), 3usize.into(), 0.25.into()]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(
            text,
            "schema_version,variant,rep,fdp\n1,oracle,3,2.5000000000000000e-1\n"
        );
        assert_eq!(t.select("fdp", &[("variant", "oracle")]), vec![0.25]);
        assert!(t.select("fdp", &[("missing", "x")]).is_empty());
    }
}
