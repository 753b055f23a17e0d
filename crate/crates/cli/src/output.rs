use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use riccati_core::Complex;
use serde_json::{Map, Value};

use crate::args::OutputFormat;
use crate::CliError;

pub fn cx(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(&'static str),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

/// Rows of a grid or path, written as CSV or as a JSON array of objects.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format!("{x:e}"),
                    Cell::Int(n) => n.to_string(),
                    Cell::Text(t) => (*t).to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(key, cell)| {
                        let value = match cell {
                            Cell::Num(x) => serde_json::json!(x),
                            Cell::Int(n) => Value::from(*n),
                            Cell::Text(t) => Value::from(*t),
                            Cell::Empty => Value::Null,
                        };
                        ((*key).to_string(), value)
                    })
                    .collect();
                Value::Object(object)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => pretty(&self.to_json()),
        }
    }
}

/// Indented JSON that keeps short arrays of scalars (complex pairs, rows of
/// a small matrix) on one line.
pub fn pretty(value: &Value) -> String {
    let mut text = String::new();
    write_value(&mut text, value, 0);
    text.push('\n');
    text
}

const INLINE_WIDTH: usize = 72;

fn compact(value: &Value) -> String {
    serde_json::to_string(value).expect("JSON values always serialize")
}

fn inline(value: &Value) -> Option<String> {
    match value {
        Value::Object(map) if !map.is_empty() => None,
        Value::Array(items) if items.iter().any(|v| v.is_object()) => None,
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect::<Option<_>>()?;
            let text = format!("[{}]", parts.join(", "));
            (text.len() <= INLINE_WIDTH).then_some(text)
        }
        _ => Some(compact(value)),
    }
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    if let Some(text) = inline(value) {
        out.push_str(&text);
        return;
    }
    let pad = "  ".repeat(depth + 1);
    let close = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, v)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&compact(&Value::from(key.as_str())));
                out.push_str(": ");
                write_value(out, v, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push('}');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, v, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push(']');
        }
        _ => out.push_str(&compact(value)),
    }
}

/// `key,re,im` rows for a JSON object: `[re, im]` pairs become complex
/// rows, plain numbers real rows, and nested objects dotted keys.
pub fn flatten_csv(value: &Value) -> String {
    let mut out = String::from("key,re,im\n");
    flatten_into(&mut out, "", value);
    out
}

fn flatten_into(out: &mut String, prefix: &str, value: &Value) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                flatten_into(out, &join(key), v);
            }
        }
        Value::Array(items) => {
            if let [Value::Number(re), Value::Number(im)] = items.as_slice() {
                let _ = writeln!(out, "{prefix},{},{}", re, im);
            } else {
                for (i, v) in items.iter().enumerate() {
                    flatten_into(out, &join(&i.to_string()), v);
                }
            }
        }
        Value::Number(x) => {
            let _ = writeln!(out, "{prefix},{x},0");
        }
        Value::Bool(b) => {
            let _ = writeln!(out, "{prefix},{},0", u8::from(*b));
        }
        Value::String(_) | Value::Null => {}
    }
}

/// Scalar results: JSON by default, `key,re,im` rows for csv.
pub fn render_scalar(value: &Value, format: Option<OutputFormat>) -> String {
    match format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => pretty(value),
        OutputFormat::Csv => flatten_csv(value),
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}
