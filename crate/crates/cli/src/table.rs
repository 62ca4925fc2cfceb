//! Plot-ready tables and their CSV / JSON encodings.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use larmor::Extended;
use serde_json::{Map, Value};

use crate::error::{PipelineError, Result};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Infinite,
    /// No value (e.g. the classical time at `E = V0`).
    Empty,
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Cell::Infinite
        } else if v.is_finite() {
            Cell::Number(v)
        } else {
            Cell::Empty
        }
    }
}

impl From<Extended> for Cell {
    fn from(v: Extended) -> Self {
        match v {
            Extended::Finite(x) => Cell::from(x),
            Extended::Infinite => Cell::Infinite,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Nine significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.8e}")
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Number(v) => format_float(*v),
            Cell::Infinite => "inf".to_owned(),
            Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Number(v) => {
                let rounded: f64 = format_float(*v).parse().unwrap_or(*v);
                serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
            Cell::Infinite => Value::String("inf".to_owned()),
            Cell::Empty => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(PipelineError::Config(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(out);
        let io = |e: csv::Error| PipelineError::Io {
            path: "<csv>".into(),
            source: io::Error::new(io::ErrorKind::Other, e),
        };
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text)).map_err(io)?;
        }
        w.flush().map_err(|e| PipelineError::Io {
            path: "<csv>".into(),
            source: e,
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json_value))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                Ok(String::from_utf8(buf).expect("csv output is utf-8"))
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialise");
                s.push('\n');
                Ok(s)
            }
        }
    }
}

/// Writes `table` to `path`, or to stdout when `path` is `None`.
pub fn emit(table: &Table, path: Option<&Path>, format: Format) -> Result<()> {
    let text = table.render(format)?;
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|source| PipelineError::Io {
                path: p.to_owned(),
                source,
            })?;
            f.write_all(text.as_bytes()).map_err(|source| PipelineError::Io {
                path: p.to_owned(),
                source,
            })
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| PipelineError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
