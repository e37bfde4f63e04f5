//! Numeric CSV ingestion.
//!
//! Comma-separated UTF-8 with a decimal point. A single header row is
//! detected when any cell of the first row is non-empty and not a number.
//! Rows with a missing numeric cell (empty, `NA` or `NaN`) are dropped and
//! counted; any other non-numeric cell outside the label column is an error.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::model::{DataMatrix, EmbeddingMatrix, Points};

#[derive(Debug, Clone)]
pub struct LoadedTable {
    pub points: Points,
    pub header: Option<Vec<String>>,
    pub labels: Option<Vec<String>>,
    pub dropped_rows: usize,
}

#[derive(Debug, Clone)]
pub struct LoadedData {
    pub data: DataMatrix,
    pub labels: Option<Vec<String>>,
    pub dropped_rows: usize,
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

fn looks_numeric(cell: &str) -> bool {
    cell.parse::<f64>().is_ok()
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn records(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    for rec in reader(path)?.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

/// Header row of a CSV file, if it has one.
pub fn peek_header(path: &Path) -> Result<Option<Vec<String>>> {
    let rows = records(path)?;
    Ok(rows
        .first()
        .filter(|(_, r)| r.iter().any(|c| !c.is_empty() && !looks_numeric(c)))
        .map(|(_, r)| r.clone()))
}

/// Reads a rectangular numeric table, splitting out an optional named label column.
pub fn load_table(path: &Path, label_column: Option<&str>) -> Result<LoadedTable> {
    let rows = records(path)?;
    let Some((first_line, first)) = rows.first() else {
        return Err(parse_err(path, 1, "file contains no rows"));
    };
    let has_header = first.iter().any(|c| !c.is_empty() && !looks_numeric(c));
    let width = first.len();
    let header = has_header.then(|| first.clone());

    let label_idx = match label_column {
        None => None,
        Some(name) => {
            let h = header
                .as_ref()
                .ok_or_else(|| parse_err(path, *first_line, format!("label column '{name}' requires a header row")))?;
            Some(h.iter().position(|c| c == name).ok_or_else(|| {
                parse_err(path, *first_line, format!("no column named '{name}' in header"))
            })?)
        }
    };
    let cols = width - usize::from(label_idx.is_some());
    if cols == 0 {
        return Err(parse_err(path, *first_line, "no numeric columns"));
    }

    let body = if has_header { &rows[1..] } else { &rows[..] };
    let mut values = Vec::with_capacity(body.len() * cols);
    let mut labels = label_idx.map(|_| Vec::with_capacity(body.len()));
    let mut dropped = 0;
    let mut row_buf = Vec::with_capacity(cols);
    'rows: for (line, rec) in body {
        if rec.len() != width {
            return Err(parse_err(
                path,
                *line,
                format!("expected {width} fields, found {}", rec.len()),
            ));
        }
        row_buf.clear();
        for (c, cell) in rec.iter().enumerate() {
            if Some(c) == label_idx {
                continue;
            }
            if is_missing(cell) {
                dropped += 1;
                continue 'rows;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row_buf.push(v),
                _ => {
                    return Err(parse_err(
                        path,
                        *line,
                        format!("non-numeric value '{cell}' in column {}", c + 1),
                    ))
                }
            }
        }
        values.extend_from_slice(&row_buf);
        if let (Some(l), Some(i)) = (labels.as_mut(), label_idx) {
            l.push(rec[i].clone());
        }
    }
    if dropped > 0 {
        warn!("{}: dropped {dropped} row(s) with missing values", path.display());
    }
    let n = values.len() / cols;
    Ok(LoadedTable {
        points: Points::new(values, n, cols)?,
        header,
        labels,
        dropped_rows: dropped,
    })
}

/// Loads a dataset; numeric columns form the matrix, the label column (if named) is split out.
pub fn load_csv_matrix(path: &Path, label_column: Option<&str>) -> Result<LoadedData> {
    let t = load_table(path, label_column)?;
    let data = DataMatrix::from_points(t.points).map_err(|e| parse_err(path, 0, e.to_string()))?;
    Ok(LoadedData {
        data,
        labels: t.labels,
        dropped_rows: t.dropped_rows,
    })
}

/// Loads an `N × t` numeric embedding.
pub fn load_embedding_csv(path: &Path) -> Result<EmbeddingMatrix> {
    Ok(EmbeddingMatrix::from_points(load_table(path, None)?.points))
}

/// Writes an embedding as headerless CSV with shortest round-trip number formatting.
pub fn write_embedding_csv(e: &EmbeddingMatrix, path: &Path) -> Result<()> {
    let mut out = String::new();
    for row in e.points().iter_rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}
