//! CSV ingestion with column-kind inference, and CSV writers.
//!
//! A column is continuous when every cell parses as a finite number, unless
//! an override says otherwise; the override column `*` applies to every
//! column not named by another override. Categories get ids in
//! first-appearance order. Empty cells are rejected.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use araf_core::dataset::{
    CategoryEncoder, ColumnKind, ColumnSpec, DataError, Dataset, FeatureColumn, FeatureMatrix, Schema,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("override names unknown column `{0}`")]
    UnknownOverride(String),
}

/// Kind forced onto a feature column, as given on the command line
/// (`name=categorical` or `name=continuous`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindOverride {
    pub column: String,
    pub kind: ColumnKind,
}

impl FromStr for KindOverride {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (column, kind) = s
            .rsplit_once('=')
            .ok_or_else(|| format!("expected NAME=KIND, got `{s}`"))?;
        let kind = match kind {
            "categorical" | "cat" => ColumnKind::Categorical,
            "continuous" | "num" => ColumnKind::Continuous,
            other => return Err(format!("unknown column kind `{other}` (categorical|continuous)")),
        };
        Ok(KindOverride {
            column: column.to_string(),
            kind,
        })
    }
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads a dataset from CSV text with a header row.
pub fn read_csv<R: Read>(
    reader: R,
    label: &str,
    overrides: &[KindOverride],
) -> Result<Dataset, LoadError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let label_pos = header
        .iter()
        .position(|h| h == label)
        .ok_or_else(|| DataError::UnknownLabelColumn(label.to_string()))?;
    let mut forced: HashMap<&str, ColumnKind> = HashMap::new();
    for o in overrides {
        if o.column != "*" && (!header.contains(&o.column) || o.column == label) {
            return Err(LoadError::UnknownOverride(o.column.clone()));
        }
        forced.insert(&o.column, o.kind);
    }

    let width = header.len();
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); width];
    let mut lines = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        // header is line 1
        let line = record.position().map_or(i + 2, |p| p.line() as usize);
        lines.push(line);
        if record.len() != width {
            return Err(DataError::RaggedRow {
                line,
                expected: width,
                found: record.len(),
            }
            .into());
        }
        for (c, cell) in record.iter().enumerate() {
            if cell.trim().is_empty() {
                return Err(DataError::MissingValue {
                    column: header[c].clone(),
                    line,
                }
                .into());
            }
            cells[c].push(cell.to_string());
        }
    }
    if cells[0].is_empty() {
        return Err(DataError::EmptyDataset.into());
    }

    let mut specs = Vec::with_capacity(width);
    let mut features = Vec::with_capacity(width - 1);
    let mut labels = Vec::new();
    for (c, column) in cells.into_iter().enumerate() {
        let name = header[c].clone();
        if c == label_pos {
            let mut enc = CategoryEncoder::new();
            labels = column.iter().map(|v| enc.encode(v)).collect();
            specs.push(ColumnSpec::label(name, enc.into_categories()));
            continue;
        }
        let numeric = || column.iter().all(|v| parse_number(v).is_some());
        let kind = forced.get(name.as_str()).or_else(|| forced.get("*"));
        let continuous = match kind {
            Some(ColumnKind::Continuous) => {
                if let Some(bad) = column.iter().position(|v| parse_number(v).is_none()) {
                    return Err(DataError::MixedColumn {
                        column: name,
                        line: lines[bad],
                        value: column[bad].clone(),
                    }
                    .into());
                }
                true
            }
            Some(_) => false,
            None => numeric(),
        };
        if continuous {
            let values = column.iter().map(|v| parse_number(v).unwrap()).collect();
            specs.push(ColumnSpec::continuous(name));
            features.push(FeatureColumn::Continuous(values));
        } else {
            let mut enc = CategoryEncoder::new();
            let ids = column.iter().map(|v| enc.encode(v)).collect();
            specs.push(ColumnSpec::categorical(name, enc.into_categories()));
            features.push(FeatureColumn::Categorical(ids));
        }
    }
    Ok(Dataset::new(Schema::new(specs)?, features, labels)?)
}

pub fn load_csv(
    path: &Path,
    label: &str,
    overrides: &[KindOverride],
) -> Result<Dataset, LoadError> {
    let file = File::open(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, label, overrides)
}

/// Writes a dataset in its file column order with decoded cells.
pub fn write_dataset<W: Write>(writer: W, ds: &Dataset) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ds.schema().columns().iter().map(|c| c.name.as_str()))?;
    for r in 0..ds.n() {
        w.write_record(ds.decode_row(r))?;
    }
    w.flush()?;
    Ok(())
}

fn number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        v.to_string()
    }
}

/// Writes a feature matrix followed by the dataset's label column.
pub fn write_matrix<W: Write>(writer: W, m: &FeatureMatrix, ds: &Dataset) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    let label = ds.schema().label();
    let mut header: Vec<&str> = m.names.iter().map(String::as_str).collect();
    header.push(&label.name);
    w.write_record(&header)?;
    for r in 0..m.rows {
        let mut row: Vec<String> = m.row(r).iter().map(|&v| number(v)).collect();
        row.push(label.categories[ds.labels()[r] as usize].clone());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
