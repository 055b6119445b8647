//! Output formats: CSV tables and JSON records.
//!
//! Numbers are written with Rust's `{:?}` float formatting, the shortest
//! decimal that parses back to the same `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => quote(s),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // JSON has no NaN or infinity; those become null.
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Rows as an array of column-name → value objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub version: String,
}

impl Metadata {
    pub fn new(seed: Option<u64>) -> Self {
        Self {
            seed,
            tolerances: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_owned(), value);
        self
    }
}

/// One command invocation: what went in, what came out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub metadata: Metadata,
}

impl OutputRecord {
    pub fn new(command: &str, metadata: Metadata) -> Self {
        Self {
            command: command.to_owned(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            metadata,
        }
    }

    pub fn input(mut self, name: &str, value: impl Serialize) -> Self {
        self.inputs.insert(name.to_owned(), json!(value));
        self
    }

    pub fn output(mut self, name: &str, value: impl Serialize) -> Self {
        self.outputs.insert(name.to_owned(), json!(value));
        self
    }

    /// Flat outputs as a two-line CSV (header, values).
    pub fn to_csv(&self) -> String {
        let names: Vec<&str> = self.outputs.keys().map(String::as_str).collect();
        let values: Vec<String> = self
            .outputs
            .values()
            .map(|v| match v {
                Value::Number(n) => match n.as_f64() {
                    Some(f) if n.is_f64() => format!("{f:?}"),
                    _ => n.to_string(),
                },
                Value::String(s) => quote(s),
                other => other.to_string(),
            })
            .collect();
        format!("{}\n{}\n", names.join(","), values.join(","))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}
