//! Rendering of command results as JSON or CSV.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::CliError;

/// CSV rows with a fixed header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(compute)?;
        for row in &self.rows {
            w.write_record(row).map_err(compute)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
        String::from_utf8(bytes).map_err(compute)
    }
}

/// What a command produced, plus whether it should exit as a check failure.
pub struct Output {
    pub json: String,
    pub table: Table,
    pub failure: Option<String>,
}

impl Output {
    pub fn new<T: Serialize>(value: &T, table: Table) -> Result<Self, CliError> {
        let mut json = serde_json::to_string_pretty(value).map_err(compute)?;
        json.push('\n');
        Ok(Output {
            json,
            table,
            failure: None,
        })
    }

    pub fn failing(mut self, failure: Option<String>) -> Self {
        self.failure = failure;
        self
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let text = match format {
            Format::Json => self.json.clone(),
            Format::Csv => self.table.render()?,
        };
        match out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Compute(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(compute)?;
                stdout.flush().map_err(compute)
            }
        }
    }
}

pub fn compute(err: impl std::fmt::Display) -> CliError {
    CliError::Compute(err.to_string())
}

/// Shortest round-trip decimal; empty for a missing value.
pub fn num(v: impl Into<Option<f64>>) -> String {
    v.into().map(|v| v.to_string()).unwrap_or_default()
}
