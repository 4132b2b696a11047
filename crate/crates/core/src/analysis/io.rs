//! CSV and JSON-lines tables. Reals are written with 17 significant digits,
//! which is enough to read back the identical `f64`.

use std::fmt;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unknown format {0:?}; expected csv or json")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    /// One JSON object per line.
    Json,
}

impl FromStr for OutputFormat {
    type Err = RecordError;
    fn from_str(s: &str) -> Result<Self, RecordError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" | "jsonl" => Ok(OutputFormat::Json),
            _ => Err(RecordError::Format(s.to_string())),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// A cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Real(f64),
    OptReal(Option<f64>),
    Bool(bool),
    Text(String),
}

pub fn format_real(x: f64) -> String {
    if x.is_finite() { format!("{x:.16e}") } else { x.to_string() }
}

impl Field {
    fn csv_cell(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Real(v) => format_real(*v),
            Field::OptReal(v) => v.map(format_real).unwrap_or_default(),
            Field::Bool(v) => v.to_string(),
            Field::Text(v) => v.clone(),
        }
    }

    fn json_value(&self) -> String {
        let real = |v: f64| if v.is_finite() { format_real(v) } else { format!("\"{v}\"") };
        match self {
            Field::Int(v) => v.to_string(),
            Field::Real(v) => real(*v),
            Field::OptReal(v) => v.map(real).unwrap_or_else(|| "null".into()),
            Field::Bool(v) => v.to_string(),
            Field::Text(v) => serde_json::Value::String(v.clone()).to_string(),
        }
    }
}

/// A table row with a fixed column set.
pub trait Record: Sized {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<Field>;
    /// Rebuild from cell texts in header order; missing optionals are empty strings.
    fn from_cells(cells: &[String]) -> Result<Self, String>;
}

pub fn parse_real(cell: &str) -> Result<f64, String> {
    cell.parse().map_err(|_| format!("not a real number: {cell:?}"))
}

pub fn parse_opt_real(cell: &str) -> Result<Option<f64>, String> {
    if cell.is_empty() { Ok(None) } else { parse_real(cell).map(Some) }
}

pub fn parse_value<T: FromStr>(cell: &str) -> Result<T, String> {
    cell.parse().map_err(|_| format!("unreadable cell {cell:?}"))
}

pub fn write_records<R: Record, W: Write>(rows: &[R], format: OutputFormat, out: W) -> Result<(), RecordError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::HEADER)?;
            for r in rows {
                w.write_record(r.fields().iter().map(Field::csv_cell))?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            for r in rows {
                let body: Vec<String> = R::HEADER
                    .iter()
                    .zip(r.fields())
                    .map(|(k, v)| format!("\"{k}\":{}", v.json_value()))
                    .collect();
                writeln!(out, "{{{}}}", body.join(","))?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn read_records<R: Record, I: Read>(format: OutputFormat, input: I) -> Result<Vec<R>, RecordError> {
    let malformed = |line: usize, message: String| RecordError::Malformed { line, message };
    match format {
        OutputFormat::Csv => {
            let mut rd = csv::Reader::from_reader(input);
            let header: Vec<String> = rd.headers()?.iter().map(String::from).collect();
            if header != R::HEADER {
                return Err(malformed(1, format!("unexpected header {header:?}")));
            }
            let mut rows = vec![];
            for (k, rec) in rd.records().enumerate() {
                let cells: Vec<String> = rec?.iter().map(String::from).collect();
                rows.push(R::from_cells(&cells).map_err(|m| malformed(k + 2, m))?);
            }
            Ok(rows)
        }
        OutputFormat::Json => {
            let mut rows = vec![];
            for (k, line) in std::io::BufReader::new(input).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let obj: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&line)?;
                let cells = R::HEADER
                    .iter()
                    .map(|key| match obj.get(*key) {
                        None | Some(serde_json::Value::Null) => String::new(),
                        Some(serde_json::Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                    })
                    .collect::<Vec<_>>();
                rows.push(R::from_cells(&cells).map_err(|m| malformed(k + 1, m))?);
            }
            Ok(rows)
        }
    }
}
