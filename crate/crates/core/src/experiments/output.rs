use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

use super::config::{ExperimentConfig, Format};

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Header line plus one line per row, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{:.16e}", v + 0.0)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One array per column, plus `metadata` and any `extra` fields.
    pub fn to_json(&self, config: &ExperimentConfig, extra: Map<String, Value>) -> Result<String> {
        let mut obj = Map::new();
        for (i, name) in self.columns.iter().enumerate() {
            let col: Vec<Value> = self.rows.iter().map(|r| number(r[i])).collect();
            obj.insert((*name).to_string(), Value::Array(col));
        }
        obj.extend(extra);
        obj.insert("metadata".into(), metadata(config));
        let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
        text.push('\n');
        Ok(text)
    }

    pub fn render(&self, config: &ExperimentConfig, extra: Map<String, Value>) -> Result<String> {
        match config.format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(config, extra),
        }
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

pub fn intervals_json(intervals: &[(f64, f64)]) -> Value {
    Value::Array(intervals.iter().map(|&(a, b)| json!([number(a), number(b)])).collect())
}

pub fn metadata(config: &ExperimentConfig) -> Value {
    let cfg: Map<String, Value> = config
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    json!({ "tool": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION"), "config": cfg })
}

/// Writes `text` to `path`, or to standard output when there is none.
pub fn emit(path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
