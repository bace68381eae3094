// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Report assembly and the two output formats.
//!
//! CSV numbers use 17 significant digits in scientific notation. JSON keeps
//! the shortest representation that parses back to the same `f64`.

use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) => s.serialize_f64(*x),
            Cell::Int(n) => s.serialize_i64(*n),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Empty => s.serialize_none(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything a command produces.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub params: RunConfig,
    /// Free-form `key: value` lines for the CSV preamble and JSON `notes`.
    pub notes: Vec<String>,
    pub results: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
    pub warnings: Vec<String>,
    pub table: Table,
    pub default_format: Format,
}

impl Report {
    pub fn new(command: &str, params: &RunConfig, table: Table, default_format: Format) -> Self {
        Report {
            command: command.to_string(),
            params: params.clone(),
            notes: Vec::new(),
            results: Map::new(),
            diagnostics: Map::new(),
            warnings: Vec::new(),
            table,
            default_format,
        }
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), to_value(value));
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) {
        self.diagnostics.insert(key.into(), to_value(value));
    }

    pub fn render(&self, format: Option<Format>) -> String {
        match format.unwrap_or(self.default_format) {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn header(&self) -> Value {
        json!({
            "nhbath": env!("CARGO_PKG_VERSION"),
            "nhbath-core": nhbath_core::VERSION,
        })
    }

    pub fn to_json(&self) -> String {
        let mut results = self.results.clone();
        results.insert("columns".into(), to_value(&self.table.columns));
        results.insert("rows".into(), to_value(&self.table.rows));
        let doc = json!({
            "command": self.command,
            "versions": self.header(),
            "params": self.params,
            "notes": self.notes,
            "results": results,
            "diagnostics": self.diagnostics,
            "warnings": self.warnings,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serialise");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# versions: {}\n", compact(&self.header())));
        out.push_str(&format!("# params: {}\n", compact(&to_value(&self.params))));
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        if !self.results.is_empty() {
            out.push_str(&format!(
                "# results: {}\n",
                compact(&Value::Object(self.results.clone()))
            ));
        }
        if !self.diagnostics.is_empty() {
            out.push_str(&format!(
                "# diagnostics: {}\n",
                compact(&Value::Object(self.diagnostics.clone()))
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }

        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(&self.table.columns)
            .expect("in-memory write");
        for row in &self.table.rows {
            writer
                .write_record(row.iter().map(Cell::csv))
                .expect("in-memory write");
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&bytes).expect("utf-8 cells"));
        out
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serialise")
}

pub fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("serialisable report field")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new(&["t", "label"]);
        t.push(vec![0.1.into(), "a,b".into()]);
        t.push(vec![Cell::Empty, Cell::Int(3)]);
        let mut r = Report::new("demo", &RunConfig::default(), t, Format::Csv);
        r.result("x", 1.5);
        r.warnings.push("careful".into());
        r
    }

    #[test]
    fn csv_has_preamble_header_and_fixed_digits() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# command: demo"));
        let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
        assert_eq!(lines[header], "t,label");
        assert_eq!(lines[header + 1], "1.0000000000000001e-1,\"a,b\"");
        assert_eq!(lines[header + 2], ",3");
        assert!(csv.contains("# warning: careful"));
    }

    #[test]
    fn json_has_the_four_blocks() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        for key in ["params", "results", "diagnostics", "warnings"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["results"]["rows"][1][0], Value::Null);
    }
}
