//! Flat record tables with a fixed column order, written as CSV or JSON.
//!
//! Reals are written with 17 significant digits in scientific notation so
//! that every `f64` survives a text round trip unchanged.

use serde_json::{Map, Number, Value};

use crate::error::{KgError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
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

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    pub fn to_text(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    /// Inverse of [`Cell::to_text`] for text produced by this module.
    pub fn parse(text: &str) -> Cell {
        if text.is_empty() {
            Cell::Empty
        } else if let Ok(i) = text.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(b) = text.parse::<bool>() {
            Cell::Bool(b)
        } else if let Some(x) = parse_real(text) {
            Cell::Real(x)
        } else {
            Cell::Text(text.to_string())
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Real(x) if x.is_finite() => Value::Number(
                format_real(*x)
                    .parse::<Number>()
                    .expect("formatted finite reals are valid JSON numbers"),
            ),
            Cell::Real(_) | Cell::Empty => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

fn parse_real(text: &str) -> Option<f64> {
    match text {
        "NaN" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ if text.contains('e') => text.parse().ok(),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl SweepTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(KgError::Domain(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Header plus rows, LF line endings.
    pub fn to_csv(&self) -> String {
        write_csv(&self.columns, self.rows.iter())
    }

    /// Header, these rows, then the rows of `trailer` (same columns).
    pub fn to_csv_with_trailer(&self, trailer: &SweepTable) -> Result<String> {
        if trailer.columns != self.columns {
            return Err(KgError::Domain("trailer columns differ from table columns".into()));
        }
        Ok(write_csv(&self.columns, self.rows.iter().chain(trailer.rows.iter())))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| KgError::Domain(format!("bad CSV header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = SweepTable::new(columns);
        for record in reader.records() {
            let record = record.map_err(|e| KgError::Domain(format!("bad CSV record: {e}")))?;
            table.push(record.iter().map(Cell::parse).collect())?;
        }
        Ok(table)
    }

    fn records_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::to_json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn write_csv<'a>(columns: &[String], rows: impl Iterator<Item = &'a Vec<Cell>>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(columns).expect("writing to memory");
    for row in rows {
        writer
            .write_record(row.iter().map(Cell::to_text))
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("CSV output is UTF-8")
}

/// `{"params": [...], "records": [...], "events": [...]}`.
pub fn json_document(params: &[(&str, Cell)], records: &SweepTable, events: Option<&SweepTable>) -> String {
    let params = Value::Array(
        params
            .iter()
            .map(|(name, value)| {
                let mut obj = Map::new();
                obj.insert("name".into(), Value::from(*name));
                obj.insert("value".into(), value.to_json());
                Value::Object(obj)
            })
            .collect(),
    );
    let mut doc = Map::new();
    doc.insert("params".into(), params);
    doc.insert("records".into(), records.records_json());
    doc.insert(
        "events".into(),
        events.map_or(Value::Array(Vec::new()), SweepTable::records_json),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    text.push('\n');
    text
}
