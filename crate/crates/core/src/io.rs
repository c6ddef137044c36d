//! CSV ingestion.

use std::fs::File;
use std::io::Read;
use std::path::PathBuf;

use thiserror::Error;

use crate::linalg::{RealMatrix, RealVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub path: PathBuf,
    pub has_header: bool,
    pub delimiter: u8,
}

impl MatrixFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        MatrixFile {
            path: path.into(),
            has_header: false,
            delimiter: b',',
        }
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// 1-based row and column of the offending cell.
    #[error("cannot parse {text:?} as a finite number at row {row}, column {col}")]
    Parse { row: usize, col: usize, text: String },
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("no data rows")]
    Empty,
    #[error("a {rows}x{cols} matrix is not a vector")]
    NotAVector { rows: usize, cols: usize },
}

/// Parses CSV text into a matrix. Rows are numbered from 1 in the input,
/// header included; blank lines are skipped.
pub fn parse_matrix<R: Read>(input: R, has_header: bool, delimiter: u8) -> Result<RealMatrix, ReadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .delimiter(delimiter)
        .from_reader(input);

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut header_pending = has_header;
    for record in reader.records() {
        let record = record?;
        let row = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if header_pending {
            header_pending = false;
            continue;
        }
        if record.iter().all(str::is_empty) {
            continue;
        }
        let mut values = Vec::with_capacity(record.len());
        for (j, cell) in record.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(ReadError::Parse {
                        row,
                        col: j + 1,
                        text: cell.to_string(),
                    })
                }
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != values.len() {
                return Err(ReadError::RaggedRows {
                    row,
                    expected: first.len(),
                    found: values.len(),
                });
            }
        }
        rows.push(values);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(ReadError::Empty);
    }
    Ok(RealMatrix::from_rows(rows).expect("rectangular finite rows"))
}

pub fn read_matrix(f: &MatrixFile) -> Result<RealMatrix, ReadError> {
    let file = File::open(&f.path).map_err(|source| ReadError::Io {
        path: f.path.display().to_string(),
        source,
    })?;
    parse_matrix(file, f.has_header, f.delimiter)
}

/// Flattens a `1 x n` or `n x 1` matrix.
pub fn matrix_to_vector(m: RealMatrix) -> Result<RealVector, ReadError> {
    if m.rows() != 1 && m.cols() != 1 {
        return Err(ReadError::NotAVector {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(RealVector::from_slice(m.entries()).expect("finite entries"))
}

pub fn read_vector(f: &MatrixFile) -> Result<RealVector, ReadError> {
    matrix_to_vector(read_matrix(f)?)
}
