//! CSV tables.
//!
//! Every file starts with one `#` line naming the schema and version,
//! followed by a header row. Floats are written in shortest round-trip form,
//! so reading a table back yields the same bits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qincompat::analysis::{ScalingFit, SweepTable};

use crate::CliError;

pub const SWEEP_SCHEMA: &str = "qincompat-sweep v1";
pub const SCALING_SCHEMA: &str = "qincompat-scaling v1";

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

fn writer(path: &Path, schema: &str, meta: &str) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# {schema} {meta}").map_err(|e| io_err(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out))
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Writes `h, T, <estimation columns>, error`; a failed point leaves its
/// numeric fields empty.
pub fn write_sweep(path: &Path, table: &SweepTable, size: &str) -> Result<(), CliError> {
    let mut w = writer(path, SWEEP_SCHEMA, &format!("set={} size={size}", table.set))?;
    let value_cols = table.value_columns();
    let mut header = vec!["h".to_string(), "T".to_string()];
    header.extend(value_cols.iter().cloned());
    header.push("error".into());
    w.write_record(&header).map_err(|e| io_err(path, e))?;
    for row in &table.rows {
        let mut rec = vec![fmt_f64(row.h), fmt_f64(row.t)];
        match &row.result {
            Some(res) => {
                let vals = res.csv_values();
                let last = vals.len() - 1;
                for (i, v) in vals.into_iter().enumerate() {
                    // rank column
                    rec.push(if i == last { format!("{}", v as usize) } else { fmt_f64(v) });
                }
            }
            None => rec.extend(std::iter::repeat_n(String::new(), value_cols.len())),
        }
        rec.push(row.error.clone().unwrap_or_default());
        w.write_record(&rec).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Writes `x, R, fit` with the fitted model evaluated at every `x`.
pub fn write_scaling(
    path: &Path,
    x_name: &str,
    data: &[(f64, f64)],
    model: impl Fn(f64) -> f64,
    fit: &ScalingFit,
) -> Result<(), CliError> {
    let mut w = writer(path, SCALING_SCHEMA, &format!("form={}", fit.form))?;
    w.write_record([x_name, "R", "fit"]).map_err(|e| io_err(path, e))?;
    for &(x, r) in data {
        w.write_record([fmt_f64(x), fmt_f64(r), fmt_f64(model(x))])
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// `(x, R)` pairs from any table with a header row. Rows whose `R` field is
/// empty or NaN are skipped; with `select_h`, only rows whose `h` column
/// equals it are kept.
pub fn read_pairs(
    path: &Path,
    x_col: &str,
    r_col: &str,
    select_h: Option<f64>,
) -> Result<Vec<(f64, f64)>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let headers = rdr.headers().map_err(|e| io_err(path, e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Config(format!("{}: no column '{name}'", path.display())))
    };
    let (xi, ri) = (col(x_col)?, col(r_col)?);
    let hi = match select_h {
        Some(_) => Some(col("h")?),
        None => None,
    };
    let parse = |s: &str, line: usize| {
        s.parse::<f64>()
            .map_err(|e| CliError::Config(format!("{}:{line}: cannot parse '{s}': {e}", path.display())))
    };
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let line = rec.position().map_or(n + 2, |p| p.line() as usize);
        if let (Some(hi), Some(h0)) = (hi, select_h) {
            if parse(&rec[hi], line)? != h0 {
                continue;
            }
        }
        let r = &rec[ri];
        if r.is_empty() {
            continue;
        }
        let r = parse(r, line)?;
        if r.is_nan() {
            continue;
        }
        out.push((parse(&rec[xi], line)?, r));
    }
    Ok(out)
}
