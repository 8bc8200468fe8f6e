//! Rendering of tables as CSV and of documents as JSON.

use std::io::Write;

use serde::Serialize;

use super::CliError;
use crate::extended::Extended;

/// One CSV cell. Numbers use 17 significant digits in scientific notation,
/// infinities the text `inf`, and inapplicable entries stay empty.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Ext(Extended),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Ext(Extended::Finite(v)) => format_number(*v),
            Cell::Ext(Extended::Infinite) => "inf".into(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Extended> for Cell {
    fn from(v: Extended) -> Self {
        Cell::Ext(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub fn format_number(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // Adding zero maps -0 to +0.
        format!("{:.16e}", v + 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(io_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .map_err(io_error)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Config(format!("output: {e}")))
    }
}

fn io_error(e: csv::Error) -> CliError {
    CliError::Config(format!("output: {e}"))
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<Vec<u8>, CliError> {
    let mut out =
        serde_json::to_vec_pretty(doc).map_err(|e| CliError::Config(format!("output: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// Writes to `path`, or to stdout without one.
pub fn emit(bytes: &[u8], path: Option<&str>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| CliError::Config(format!("output_path {p}: {e}")))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Config(format!("stdout: {e}"))),
    }
}
