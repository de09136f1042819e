//! Sweep table as CSV: fixed header, empty fields for infeasible values,
//! shortest round-trip decimals.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::{SweepRow, SweepSpec};

/// Columns after the swept parameter.
pub const VALUE_COLUMNS: [&str; 10] = [
    "p_refl",
    "p_trans",
    "c_sc_t",
    "p_sc_t",
    "c_sc_r",
    "p_sc_r",
    "c_c_t",
    "c_c_r",
    "c_none",
    "flux_residual",
];

/// Written in the residual column of rows whose solve was rejected.
pub const ERROR_MARKER: &str = "error";

pub fn header(spec: &SweepSpec) -> Vec<String> {
    let mut h = vec![spec.parameter.column_name().to_string()];
    h.extend(VALUE_COLUMNS.iter().map(|s| s.to_string()));
    if spec.dump_amplitudes {
        for side in ["r", "t"] {
            for j in 1..=3 {
                h.push(format!("re_{side}{j}"));
                h.push(format!("im_{side}{j}"));
            }
        }
    }
    h
}

fn num(out: &mut String, x: f64) {
    write!(out, "{x:?}").unwrap();
}

fn opt(out: &mut String, x: Option<f64>) {
    if let Some(x) = x {
        num(out, x);
    }
}

pub fn render_csv(rows: &[SweepRow], spec: &SweepSpec) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::NoData("no sweep rows to write".into()));
    }
    let mut out = header(spec).join(",");
    out.push('\n');
    for row in rows {
        num(&mut out, row.parameter);
        match &row.values {
            Ok(v) => {
                for x in [
                    Some(v.p_refl),
                    Some(v.p_trans),
                    v.c_sc_t,
                    v.p_sc_t,
                    v.c_sc_r,
                    v.p_sc_r,
                    v.c_c_t,
                    v.c_c_r,
                    v.c_none,
                    Some(v.flux_residual),
                ] {
                    out.push(',');
                    opt(&mut out, x);
                }
                if spec.dump_amplitudes {
                    for z in v.r.iter().chain(&v.t) {
                        out.push(',');
                        num(&mut out, z.re);
                        out.push(',');
                        num(&mut out, z.im);
                    }
                }
            }
            Err(_) => {
                out.push_str(&",".repeat(VALUE_COLUMNS.len() - 1));
                out.push(',');
                out.push_str(ERROR_MARKER);
                if spec.dump_amplitudes {
                    out.push_str(&",".repeat(12));
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_csv(rows: &[SweepRow], spec: &SweepSpec, path: &Path) -> Result<()> {
    let text = render_csv(rows, spec)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// A parsed sweep CSV. Empty fields and the error marker read as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::NoData("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::Config(format!(
                "CSV line {} has {} fields, expected {}",
                n + 2,
                fields.len(),
                header.len()
            )));
        }
        let row = fields
            .iter()
            .map(|f| match *f {
                "" | ERROR_MARKER => Ok(None),
                s => s
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("CSV line {}: bad number '{s}'", n + 2))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}
