use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::rip_bounds::{CurveRow, RowFlag};

pub const CURVE_HEADER: [&str; 9] = [
    "compression_rate",
    "sparsity_level",
    "n",
    "N",
    "s",
    "lower_bound",
    "upper_new",
    "upper_classical",
    "flags",
];

/// 17 significant digits, enough to reproduce any `f64` exactly.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Missing values become the empty field.
pub fn format_opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

pub fn parse_opt_real(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| Error::domain(format!("not a real number: '{field}'")))
}

/// Writes a header and rows of preformatted fields.
pub fn write_table<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn curve_record(row: &CurveRow) -> Vec<String> {
    vec![
        format_real(row.compression_rate),
        format_real(row.sparsity_level),
        row.n.to_string(),
        row.ambient.to_string(),
        row.s.to_string(),
        format_opt_real(row.lower_bound),
        format_opt_real(row.upper_new),
        format_opt_real(row.upper_classical),
        row.flags.iter().map(|f| f.token()).collect::<Vec<_>>().join(";"),
    ]
}

pub fn write_curve_csv<W: Write>(out: W, rows: &[CurveRow]) -> Result<()> {
    write_table(out, &CURVE_HEADER, rows.iter().map(curve_record))
}

pub fn read_curve_csv<R: Read>(input: R) -> Result<Vec<CurveRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CURVE_HEADER {
        return Err(Error::domain(format!("unexpected curve header: {header:?}")));
    }
    let count = |field: &str| -> Result<usize> {
        field
            .parse()
            .map_err(|_| Error::domain(format!("not a count: '{field}'")))
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let f = |i: usize| record.get(i).unwrap_or("");
        let flags = f(8)
            .split(';')
            .filter(|t| !t.is_empty())
            .map(|t| RowFlag::from_token(t).ok_or_else(|| Error::domain(format!("unknown flag '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(CurveRow {
            compression_rate: parse_opt_real(f(0))?.unwrap_or(f64::NAN),
            sparsity_level: parse_opt_real(f(1))?.unwrap_or(f64::NAN),
            n: count(f(2))?,
            ambient: count(f(3))?,
            s: count(f(4))?,
            lower_bound: parse_opt_real(f(5))?,
            upper_new: parse_opt_real(f(6))?,
            upper_classical: parse_opt_real(f(7))?,
            flags,
        });
    }
    Ok(rows)
}
