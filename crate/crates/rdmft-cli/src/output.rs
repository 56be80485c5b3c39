//! CSV / JSON serialization helpers shared by the subcommands.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: Option<&str>) -> Result<Self> {
        match s.unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => anyhow::bail!("unknown format `{other}` (expected csv or json)"),
        }
    }
}

/// One output cell: a number rendered with 17 significant digits, a
/// raw string, or nothing (empty CSV field, JSON null).
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

pub fn num(x: f64) -> Cell {
    Cell::Num(x)
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json_value(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) if x.is_finite() => serde_json::json!(x),
            Cell::Num(_) => serde_json::Value::Null,
            Cell::Int(i) => serde_json::json!(i),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Header + rows, written as RFC-4180 CSV or as a JSON object
/// `{schema_version, ...metadata, columns, rows}`.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata: serde_json::Map::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: serde_json::Value) {
        self.metadata.insert(key.to_string(), value);
    }

    pub fn write(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let bytes = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json()?,
        };
        match out {
            Some(path) => std::fs::write(path, bytes)
                .with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().write_all(&bytes).context("writing stdout")
            }
        }
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.csv_field()))?;
        }
        Ok(w.into_inner()?)
    }

    fn to_json(&self) -> Result<Vec<u8>> {
        let mut obj = serde_json::Map::new();
        obj.insert("schema_version".into(), serde_json::json!(1));
        for (k, v) in &self.metadata {
            obj.insert(k.clone(), v.clone());
        }
        obj.insert("columns".into(), serde_json::json!(self.columns));
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(|c| c.json_value()).collect()))
            .collect();
        obj.insert("rows".into(), serde_json::Value::Array(rows));
        let mut bytes = serde_json::to_vec_pretty(&serde_json::Value::Object(obj))?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

/// A standalone JSON document (energy-min result).
pub fn write_json(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    match out {
        Some(path) => {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => std::io::stdout().write_all(&bytes).context("writing stdout"),
    }
}
