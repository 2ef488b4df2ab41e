//! Facet tables: one karyotype per row, one defined class per column, each
//! cell 1 (entailed), -1 (not entailed) or 0 (unknown).

use std::fs;
use std::path::Path;

use karyotype_core::iscn::{self, Karyotype, ParseError};
use thiserror::Error;

/// Rows are reported as 1-based file lines, the header being line 1.
#[derive(Debug, Error, PartialEq)]
pub enum FacetError {
    #[error("row {row}, column {column}: expected 1, -1 or 0, found {value:?}")]
    Value {
        row: u64,
        column: String,
        value: String,
    },
    #[error("row {row}: {source}")]
    Parse { row: u64, source: ParseError },
    #[error("row {row}: {message}")]
    Format { row: u64, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FacetRow {
    pub row: u64,
    pub karyotype: Karyotype,
    pub values: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FacetTable {
    pub facet_names: Vec<String>,
    pub rows: Vec<FacetRow>,
}

impl FacetTable {
    /// Number of cells that yield an assertion.
    pub fn non_zero_cells(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.values.iter().filter(|v| **v != 0).count())
            .sum()
    }
}

fn cell(value: &str) -> Option<i8> {
    match value {
        "1" => Some(1),
        "-1" => Some(-1),
        "0" => Some(0),
        _ => None,
    }
}

pub fn parse_facet_table(text: &str) -> Result<FacetTable, FacetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let csv_error = |e: csv::Error| {
        let row = e.position().map_or(0, |p| p.line());
        FacetError::Format {
            row,
            message: e.to_string(),
        }
    };

    let header = reader.headers().map_err(csv_error)?.clone();
    if header.is_empty() {
        return Ok(FacetTable::default());
    }
    if &header[0] != "Karyotype" {
        return Err(FacetError::Format {
            row: 1,
            message: format!("first column must be Karyotype, found {:?}", &header[0]),
        });
    }
    let facet_names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(FacetError::Format {
                row,
                message: format!("expected {} cells, found {}", header.len(), record.len()),
            });
        }
        let karyotype =
            iscn::parse(&record[0]).map_err(|source| FacetError::Parse { row, source })?;
        let values = record
            .iter()
            .skip(1)
            .zip(&facet_names)
            .map(|(v, column)| {
                cell(v).ok_or_else(|| FacetError::Value {
                    row,
                    column: column.clone(),
                    value: v.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        rows.push(FacetRow {
            row,
            karyotype,
            values,
        });
    }
    Ok(FacetTable { facet_names, rows })
}

pub fn load_facet_table(path: &Path) -> crate::Result<FacetTable> {
    let text = fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
    Ok(parse_facet_table(&text)?)
}
