//! Dataset ingestion and CSV/JSON serialization of results.
//!
//! CSV layouts:
//!
//! * dataset: `x,y`
//! * fit: `algorithm,A,mu,sigma,iterations_used,points_used,dropped_nonpositive`
//! * sweep: `axis_value`, then `<alg>_mean_are_pct,<alg>_worst_are_pct` for
//!   each algorithm, `theoretical_worst_pct`, then `<alg>_failures` for each
//!   algorithm.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that parsing them back is lossless.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::Serialize;

use crate::bench::{AlgorithmStats, SweepRow};
use crate::error::{Error, Result};
use crate::fitters::{Algorithm, FitResult};
use crate::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidInput(format!("unknown format '{other}'"))),
        }
    }
}

/// 17 significant digits.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn parse_error(row: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        column,
        message: message.into(),
    }
}

fn parse_field<T: std::str::FromStr>(field: &str, row: usize, column: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| parse_error(row, column, format!("cannot parse '{field}'")))
}

/// Reads a two-column `x,y` CSV. A first row whose first field is not a
/// number is taken as a header and skipped.
pub fn read_dataset<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => parse_error(row, 1, format!("{other:?}")),
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if row == 1 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != 2 {
            return Err(parse_error(
                row,
                record.len().min(2) + 1,
                format!("expected 2 columns, found {}", record.len()),
            ));
        }
        let x: f64 = parse_field(&record[0], row, 1)?;
        let y: f64 = parse_field(&record[1], row, 2)?;
        for (v, column) in [(x, 1), (y, 2)] {
            if !v.is_finite() {
                return Err(parse_error(row, column, "value is not finite"));
            }
        }
        xs.push(x);
        ys.push(y);
    }
    Dataset::new(xs, ys)
}

pub fn read_dataset_path(path: impl AsRef<Path>) -> Result<Dataset> {
    read_dataset(File::open(path)?)
}

pub fn write_dataset(data: &Dataset) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in data.xs().iter().zip(data.ys()) {
        out.push_str(&format!("{},{}\n", format_f64(*x), format_f64(*y)));
    }
    out
}

pub const FIT_COLUMNS: [&str; 7] = [
    "algorithm",
    "A",
    "mu",
    "sigma",
    "iterations_used",
    "points_used",
    "dropped_nonpositive",
];

#[derive(Serialize)]
struct FitRecord {
    algorithm: Algorithm,
    #[serde(rename = "A")]
    amplitude: f64,
    mu: f64,
    sigma: f64,
    iterations_used: usize,
    points_used: usize,
    dropped_nonpositive: usize,
}

impl From<&FitResult> for FitRecord {
    fn from(r: &FitResult) -> Self {
        Self {
            algorithm: r.algorithm,
            amplitude: r.params.amplitude(),
            mu: r.params.mean(),
            sigma: r.params.sigma(),
            iterations_used: r.iterations_used,
            points_used: r.points_used,
            dropped_nonpositive: r.dropped_nonpositive,
        }
    }
}

pub fn write_fit_results(results: &[FitResult], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = FIT_COLUMNS.join(",");
            out.push('\n');
            for r in results {
                let p = &r.params;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.algorithm,
                    format_f64(p.amplitude()),
                    format_f64(p.mean()),
                    format_f64(p.sigma()),
                    r.iterations_used,
                    r.points_used,
                    r.dropped_nonpositive
                ));
            }
            out
        }
        Format::Json => {
            let records: Vec<FitRecord> = results.iter().map(FitRecord::from).collect();
            let mut s = serde_json::to_string_pretty(&records).expect("fit records serialize");
            s.push('\n');
            s
        }
    }
}

/// Sweep CSV header for the given algorithm order.
pub fn sweep_header(algorithms: &[Algorithm]) -> Vec<String> {
    let mut cols = vec!["axis_value".to_string()];
    for a in algorithms {
        cols.push(format!("{a}_mean_are_pct"));
        cols.push(format!("{a}_worst_are_pct"));
    }
    cols.push("theoretical_worst_pct".into());
    for a in algorithms {
        cols.push(format!("{a}_failures"));
    }
    cols
}

/// Serializes sweep rows. `algorithms` fixes the column order and is used
/// for the header even when `rows` is empty.
pub fn write_sweep(rows: &[SweepRow], algorithms: &[Algorithm], format: Format) -> Result<String> {
    for row in rows {
        if row.stats.len() != algorithms.len()
            || row
                .stats
                .iter()
                .zip(algorithms)
                .any(|(s, a)| s.algorithm != *a)
        {
            return Err(Error::InvalidInput(
                "sweep row algorithms do not match the requested columns".into(),
            ));
        }
    }
    match format {
        Format::Csv => {
            let mut out = sweep_header(algorithms).join(",");
            out.push('\n');
            for row in rows {
                let mut fields = vec![format_f64(row.axis_value)];
                for s in &row.stats {
                    fields.push(format_f64(s.mean_are_pct));
                    fields.push(format_f64(s.worst_are_pct));
                }
                fields.push(format_f64(row.theoretical_worst_pct));
                fields.extend(row.stats.iter().map(|s| s.failures.to_string()));
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("sweep rows serialize");
            s.push('\n');
            Ok(s)
        }
    }
}

/// Parses a sweep CSV produced by [`write_sweep`].
pub fn read_sweep<R: Read>(reader: R) -> Result<(Vec<Algorithm>, Vec<SweepRow>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| parse_error(1, 1, e.to_string()))?
        .clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 2 || cols[0] != "axis_value" || !(cols.len() - 2).is_multiple_of(3) {
        return Err(parse_error(1, 1, "not a sweep header"));
    }
    let k = (cols.len() - 2) / 3;
    let mut algorithms = Vec::with_capacity(k);
    for i in 0..k {
        let name = cols[1 + 2 * i]
            .strip_suffix("_mean_are_pct")
            .ok_or_else(|| parse_error(1, 2 + 2 * i, "expected <alg>_mean_are_pct"))?;
        let alg: Algorithm = name
            .parse()
            .map_err(|_| parse_error(1, 2 + 2 * i, format!("unknown algorithm '{name}'")))?;
        algorithms.push(alg);
    }
    if header != sweep_header(&algorithms) {
        return Err(parse_error(1, 1, "sweep header columns out of order"));
    }

    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| parse_error(row, 1, e.to_string()))?;
        let f = |c: usize| -> Result<f64> { parse_field(&record[c], row, c + 1) };
        let stats = algorithms
            .iter()
            .enumerate()
            .map(|(j, &algorithm)| {
                Ok(AlgorithmStats {
                    algorithm,
                    mean_are_pct: f(1 + 2 * j)?,
                    worst_are_pct: f(2 + 2 * j)?,
                    failures: parse_field(&record[2 + 2 * k + j], row, 3 + 2 * k + j)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(SweepRow {
            axis_value: f(0)?,
            stats,
            theoretical_worst_pct: f(1 + 2 * k)?,
        });
    }
    Ok((algorithms, rows))
}
