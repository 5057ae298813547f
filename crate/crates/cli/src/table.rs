//! Tables that render either as aligned text or as CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ripbound::io::{format_real, write_table, RunManifest};
use ripbound::Result;

#[derive(Debug, Clone)]
pub enum Cell {
    Real(f64),
    OptReal(Option<f64>),
    Int(u128),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Real(x) => format_real(*x),
            Cell::OptReal(x) => x.map(format_real).unwrap_or_default(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Real(x) => human_real(*x),
            Cell::OptReal(Some(x)) => human_real(*x),
            Cell::OptReal(None) => "-".into(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.is_empty() => "-".into(),
            Cell::Text(s) => s.clone(),
        }
    }
}

fn human_real(x: f64) -> String {
    if x != 0.0 && x.is_finite() && (x.abs() < 1e-3 || x.abs() >= 1e7) {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::OptReal(x)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u128)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as u128)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
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

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// A two-column `metric,value` table.
    pub fn metrics() -> Self {
        Self::new(&["metric", "value"])
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn metric(&mut self, name: impl Into<String>, value: impl Into<Cell>) {
        self.push(vec![Cell::Text(name.into()), value.into()]);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
        write_table(out, &header, self.rows.iter().map(|r| r.iter().map(Cell::csv).collect()))
    }

    pub fn write_human<W: Write>(&self, mut out: W) -> io::Result<()> {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |out: &mut W, fields: &[String]| -> io::Result<()> {
            let padded: Vec<String> = fields
                .iter()
                .zip(&widths)
                .map(|(f, &w)| format!("{f:<w$}"))
                .collect();
            writeln!(out, "{}", padded.join("  ").trim_end())
        };
        line(&mut out, &self.header)?;
        for row in &cells {
            line(&mut out, row)?;
        }
        out.flush()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

/// Writes `table` to `out` (with a manifest alongside) or to standard output.
pub fn emit(table: &Table, format: Format, out: Option<&Path>, manifest: &RunManifest) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            match format {
                Format::Csv => table.write_csv(&mut w)?,
                Format::Text => table.write_human(&mut w)?,
            }
            w.flush()?;
            manifest.write_alongside(path)?;
        }
        None => {
            let stdout = io::stdout().lock();
            match format {
                Format::Csv => table.write_csv(stdout)?,
                Format::Text => table.write_human(stdout)?,
            }
        }
    }
    Ok(())
}
