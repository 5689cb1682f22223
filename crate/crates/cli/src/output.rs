// SPDX-License-Identifier: Apache-2.0

//! Tables rendered as CSV or JSON.

use lambda_holonomy::QubitGate;
use serde_json::{json, Value};

/// 17 significant digits.
pub fn float(x: f64) -> String {
    // no negative zero
    format!("{:.16e}", x + 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => if *b { "1" } else { "0" }.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x + 0.0),
            Cell::Float(x) => json!(x.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Report {
            command,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            warnings: Vec::new(),
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
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_structured(&self) -> String {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
            "warnings": self.warnings,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("plain values serialize");
        s.push('\n');
        s
    }
}

pub const GATE_COLUMNS: [&str; 8] = ["u00_re", "u00_im", "u01_re", "u01_im", "u10_re", "u10_im", "u11_re", "u11_im"];

pub fn gate_cells(g: &QubitGate) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(8);
    for r in 0..2 {
        for c in 0..2 {
            cells.push(Cell::Float(g.0[r][c].re));
            cells.push(Cell::Float(g.0[r][c].im));
        }
    }
    cells
}
