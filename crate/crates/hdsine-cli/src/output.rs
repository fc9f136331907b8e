//! Row-oriented experiment output with platform-stable rendering.
//!
//! Every float is printed with 17 significant digits so reruns are
//! byte-identical and diffable; JSON mirrors the CSV fields (objects keyed
//! by column name, keys sorted).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Field {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
}

/// 17 significant digits, the shortest rendering that survives a
/// round-trip for every f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Field {
    fn render_csv(&self) -> String {
        match self {
            Field::Str(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Float(x) => fmt_float(*x),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn render_json(&self) -> serde_json::Value {
        match self {
            Field::Str(s) => serde_json::Value::String(s.clone()),
            Field::Int(i) => serde_json::Value::from(*i),
            // Keep the fixed decimal rendering in JSON too, so both formats
            // are diffable with the same digits.
            Field::Float(x) => serde_json::Value::String(fmt_float(*x)),
            Field::Bool(b) => serde_json::Value::Bool(*b),
        }
    }
}

/// An experiment result: a header plus one row per trial/radius/grid-point.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let rendered: Vec<String> = row.iter().map(Field::render_csv).collect();
                    let _ = writeln!(out, "{}", rendered.join(","));
                }
                out
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: serde_json::Map<String, serde_json::Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, f)| (c.to_string(), f.render_json()))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&serde_json::Value::Array(rows))
                    .expect("rows are serializable");
                out.push('\n');
                out
            }
        }
    }

    /// Write to `path`, or to stdout when no path is given.
    pub fn write(&self, format: Format, path: Option<&Path>) -> std::io::Result<()> {
        let rendered = self.render(format);
        match path {
            Some(p) => fs::write(p, rendered),
            None => std::io::stdout().write_all(rendered.as_bytes()),
        }
    }
}

/// Serialize a violation record to `path` (pretty JSON plus newline).
pub fn write_violation(path: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    let mut rendered = serde_json::to_string_pretty(value).expect("value is serializable");
    rendered.push('\n');
    fs::write(path, rendered)
}

pub fn json_vector(v: &hdsine::Vector) -> serde_json::Value {
    serde_json::Value::Array(
        v.coords()
            .iter()
            .map(|&c| serde_json::Value::String(fmt_float(c)))
            .collect(),
    )
}

pub fn json_vectors(vs: &[hdsine::Vector]) -> serde_json::Value {
    serde_json::Value::Array(vs.iter().map(json_vector).collect())
}
