//! Result envelopes and their JSON, CSV and plain-text forms.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Plain,
}

/// Flat rows for the CSV and plain renderings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultEnvelope {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub version: String,
    pub duration_seconds: f64,
    #[serde(skip)]
    pub table: Table,
}

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every non-integer number in `v`. Object keys come out sorted
/// because `serde_json::Map` is ordered.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(f64::NAN));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn format_real(x: f64) -> String {
    let x = round_significant(x);
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn format_cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format_real(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the envelope in `format`. Identical envelopes produce identical
/// bytes; only `durationSeconds` differs between runs of the same config.
pub fn emit<W: Write>(envelope: &ResultEnvelope, format: Format, out: &mut W) -> Result<()> {
    match format {
        Format::Json => {
            let v = normalize(serde_json::to_value(envelope)?);
            serde_json::to_writer_pretty(&mut *out, &v)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let t = &envelope.table;
            writeln!(
                out,
                "{}",
                t.header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",")
            )?;
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|c| csv_field(&format_cell(c))).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Plain => {
            let t = &envelope.table;
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(format_cell).collect()).collect();
            let widths: Vec<usize> = (0..t.header.len())
                .map(|i| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([t.header[i].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |row: &[String]| {
                row.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "# {} ({:.3} s)", envelope.command, envelope.duration_seconds)?;
            writeln!(out, "{}", line(&t.header))?;
            for row in &cells {
                writeln!(out, "{}", line(row))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
