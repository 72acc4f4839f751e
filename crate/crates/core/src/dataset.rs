//! Column-typed datasets with a single class label column.
//!
//! Features are the non-label columns, numbered `0..p` in file order with the
//! label column skipped. Categorical cells hold dense category ids assigned in
//! first-appearance order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("label column `{0}` not found in header")]
    UnknownLabelColumn(String),
    #[error("dataset has no data rows")]
    EmptyDataset,
    #[error("line {line}: column `{column}` is continuous but holds `{value}`")]
    MixedColumn {
        column: String,
        line: usize,
        value: String,
    },
    #[error("line {line}: missing value in column `{column}`")]
    MissingValue { column: String, line: usize },
    #[error("column `{0}` is continuous; a categorical column is required")]
    ContinuousPresent(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnKind {
    Categorical,
    Continuous,
    Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    /// Category names indexed by id. Empty for continuous columns.
    pub categories: Vec<String>,
}

impl ColumnSpec {
    pub fn categorical(name: impl Into<String>, categories: Vec<String>) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Categorical,
            categories,
        }
    }

    pub fn continuous(name: impl Into<String>) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Continuous,
            categories: Vec::new(),
        }
    }

    pub fn label(name: impl Into<String>, categories: Vec<String>) -> Self {
        ColumnSpec {
            name: name.into(),
            kind: ColumnKind::Label,
            categories,
        }
    }

    pub fn category_id(&self, value: &str) -> Option<u32> {
        self.categories
            .iter()
            .position(|c| c == value)
            .map(|i| i as u32)
    }
}

/// Ordered column list with exactly one label column.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    columns: Vec<ColumnSpec>,
    label: usize,
    features: Vec<usize>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnSpec>) -> Result<Self, DataError> {
        let labels: Vec<usize> = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == ColumnKind::Label)
            .map(|(i, _)| i)
            .collect();
        if labels.len() != 1 {
            return Err(DataError::InvalidSchema(format!(
                "expected exactly one label column, found {}",
                labels.len()
            )));
        }
        for c in &columns {
            let mut seen = HashMap::new();
            for cat in &c.categories {
                if seen.insert(cat.as_str(), ()).is_some() {
                    return Err(DataError::InvalidSchema(format!(
                        "duplicate category `{cat}` in column `{}`",
                        c.name
                    )));
                }
            }
            if c.kind == ColumnKind::Continuous && !c.categories.is_empty() {
                return Err(DataError::InvalidSchema(format!(
                    "continuous column `{}` has categories",
                    c.name
                )));
            }
        }
        let label = labels[0];
        let features = (0..columns.len()).filter(|&i| i != label).collect();
        Ok(Schema {
            columns,
            label,
            features,
        })
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    /// Position of the label column in file order.
    pub fn label_position(&self) -> usize {
        self.label
    }

    pub fn label(&self) -> &ColumnSpec {
        &self.columns[self.label]
    }

    pub fn num_features(&self) -> usize {
        self.features.len()
    }

    pub fn num_classes(&self) -> usize {
        self.label().categories.len()
    }

    /// The `i`-th feature (non-label) column.
    pub fn feature(&self, i: usize) -> &ColumnSpec {
        &self.columns[self.features[i]]
    }

    /// File-order position of feature `i`.
    pub fn feature_position(&self, i: usize) -> usize {
        self.features[i]
    }

    pub fn features(&self) -> impl Iterator<Item = &ColumnSpec> + '_ {
        self.features.iter().map(move |&i| &self.columns[i])
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features().position(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureColumn {
    Categorical(Vec<u32>),
    Continuous(Vec<f64>),
}

impl FeatureColumn {
    pub fn len(&self) -> usize {
        match self {
            FeatureColumn::Categorical(v) => v.len(),
            FeatureColumn::Continuous(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_categorical(&self) -> Option<&[u32]> {
        match self {
            FeatureColumn::Categorical(v) => Some(v),
            FeatureColumn::Continuous(_) => None,
        }
    }

    fn select(&self, rows: &[usize]) -> FeatureColumn {
        match self {
            FeatureColumn::Categorical(v) => {
                FeatureColumn::Categorical(rows.iter().map(|&r| v[r]).collect())
            }
            FeatureColumn::Continuous(v) => {
                FeatureColumn::Continuous(rows.iter().map(|&r| v[r]).collect())
            }
        }
    }
}

/// Immutable column-major table of `n` records and `p` features plus labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Schema,
    features: Vec<FeatureColumn>,
    labels: Vec<u32>,
}

impl Dataset {
    pub fn new(
        schema: Schema,
        features: Vec<FeatureColumn>,
        labels: Vec<u32>,
    ) -> Result<Self, DataError> {
        let n = labels.len();
        if n == 0 {
            return Err(DataError::EmptyDataset);
        }
        if features.len() != schema.num_features() {
            return Err(DataError::Invalid(format!(
                "schema has {} features, got {} columns",
                schema.num_features(),
                features.len()
            )));
        }
        for (i, col) in features.iter().enumerate() {
            let spec = schema.feature(i);
            if col.len() != n {
                return Err(DataError::Invalid(format!(
                    "column `{}` has {} rows, expected {n}",
                    spec.name,
                    col.len()
                )));
            }
            match (col, spec.kind) {
                (FeatureColumn::Categorical(ids), ColumnKind::Categorical) => {
                    let m = spec.categories.len() as u32;
                    if ids.iter().any(|&id| id >= m) {
                        return Err(DataError::Invalid(format!(
                            "column `{}` holds a category id >= {m}",
                            spec.name
                        )));
                    }
                }
                (FeatureColumn::Continuous(_), ColumnKind::Continuous) => {}
                _ => {
                    return Err(DataError::Invalid(format!(
                        "column `{}` data does not match its declared kind",
                        spec.name
                    )))
                }
            }
        }
        let c = schema.num_classes() as u32;
        if labels.iter().any(|&y| y >= c) {
            return Err(DataError::Invalid(format!("label id >= {c}")));
        }
        Ok(Dataset {
            schema,
            features,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Number of records.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of features.
    pub fn p(&self) -> usize {
        self.features.len()
    }

    pub fn num_classes(&self) -> usize {
        self.schema.num_classes()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn feature(&self, i: usize) -> &FeatureColumn {
        &self.features[i]
    }

    pub fn features(&self) -> &[FeatureColumn] {
        &self.features
    }

    /// Category id columns, or the first continuous column's name as an error.
    pub fn categorical_columns(&self) -> Result<Vec<&[u32]>, DataError> {
        self.features
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.as_categorical()
                    .ok_or_else(|| DataError::ContinuousPresent(self.schema.feature(i).name.clone()))
            })
            .collect()
    }

    pub fn is_all_categorical(&self) -> bool {
        self.features
            .iter()
            .all(|c| matches!(c, FeatureColumn::Categorical(_)))
    }

    /// Per-class record counts.
    pub fn class_totals(&self) -> Vec<u64> {
        let mut totals = alloc::vec![0u64; self.num_classes()];
        for &y in &self.labels {
            totals[y as usize] += 1;
        }
        totals
    }

    /// New dataset holding the given rows in order (repeats allowed).
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset, DataError> {
        Dataset::new(
            self.schema.clone(),
            self.features.iter().map(|c| c.select(rows)).collect(),
            rows.iter().map(|&r| self.labels[r]).collect(),
        )
    }

    /// Replaces feature columns, keeping the label. Used after discretization.
    pub fn with_features(
        &self,
        specs: Vec<ColumnSpec>,
        features: Vec<FeatureColumn>,
    ) -> Result<Dataset, DataError> {
        let mut columns = Vec::with_capacity(specs.len() + 1);
        let mut specs = specs.into_iter();
        for pos in 0..self.schema.columns().len() {
            if pos == self.schema.label_position() {
                columns.push(self.schema.label().clone());
            } else if let Some(s) = specs.next() {
                columns.push(s);
            }
        }
        columns.extend(specs);
        Dataset::new(Schema::new(columns)?, features, self.labels.clone())
    }

    /// Decodes one record back to its string cells in file column order.
    pub fn decode_row(&self, row: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(self.schema.columns().len());
        let mut f = 0;
        for (pos, spec) in self.schema.columns().iter().enumerate() {
            if pos == self.schema.label_position() {
                out.push(spec.categories[self.labels[row] as usize].clone());
                continue;
            }
            match &self.features[f] {
                FeatureColumn::Categorical(ids) => {
                    out.push(spec.categories[ids[row] as usize].clone())
                }
                FeatureColumn::Continuous(v) => out.push(v[row].to_string()),
            }
            f += 1;
        }
        out
    }
}

/// Assigns dense ids to strings in first-appearance order.
#[derive(Debug, Default, Clone)]
pub struct CategoryEncoder {
    ids: HashMap<String, u32>,
    names: Vec<String>,
}

impl CategoryEncoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn encode(&mut self, value: &str) -> u32 {
        if let Some(&id) = self.ids.get(value) {
            return id;
        }
        let id = self.names.len() as u32;
        self.ids.insert(value.to_string(), id);
        self.names.push(value.to_string());
        id
    }

    pub fn into_categories(self) -> Vec<String> {
        self.names
    }
}

/// Dense row-major numeric matrix with column names.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub names: Vec<String>,
    pub rows: usize,
    pub values: Vec<f64>,
}

impl FeatureMatrix {
    pub fn cols(&self) -> usize {
        self.names.len()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.cols();
        &self.values[r * w..(r + 1) * w]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols() + c]
    }

    pub fn select_rows(&self, rows: &[usize]) -> FeatureMatrix {
        let mut values = Vec::with_capacity(rows.len() * self.cols());
        for &r in rows {
            values.extend_from_slice(self.row(r));
        }
        FeatureMatrix {
            names: self.names.clone(),
            rows: rows.len(),
            values,
        }
    }
}

/// One-hot expansion of all categorical features; columns named `col=cat`.
pub fn one_hot(ds: &Dataset) -> Result<FeatureMatrix, DataError> {
    let cols = ds.categorical_columns()?;
    let mut names = Vec::new();
    let mut offsets = Vec::with_capacity(cols.len());
    for spec in ds.schema().features() {
        offsets.push(names.len());
        for cat in &spec.categories {
            names.push(format!("{}={}", spec.name, cat));
        }
    }
    let width = names.len();
    let mut values = alloc::vec![0.0; ds.n() * width];
    for (f, ids) in cols.iter().enumerate() {
        for (r, &id) in ids.iter().enumerate() {
            values[r * width + offsets[f] + id as usize] = 1.0;
        }
    }
    Ok(FeatureMatrix {
        names,
        rows: ds.n(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn small() -> Dataset {
        let schema = Schema::new(vec![
            ColumnSpec::categorical("a", strings(&["red", "blue", "green"])),
            ColumnSpec::label("y", strings(&["0", "1"])),
            ColumnSpec::categorical("b", strings(&["x", "z"])),
        ])
        .unwrap();
        Dataset::new(
            schema,
            vec![
                FeatureColumn::Categorical(vec![0, 1]),
                FeatureColumn::Categorical(vec![1, 1]),
            ],
            vec![0, 1],
        )
        .unwrap()
    }

    #[test]
    fn encoder_uses_first_appearance() {
        let mut enc = CategoryEncoder::new();
        let ids: Vec<u32> = ["red", "blue", "red"].iter().map(|v| enc.encode(v)).collect();
        assert_eq!(ids, vec![0, 1, 0]);
        assert_eq!(enc.into_categories(), strings(&["red", "blue"]));
    }

    #[test]
    fn schema_requires_one_label() {
        let err = Schema::new(vec![ColumnSpec::categorical("a", strings(&["x"]))]);
        assert!(matches!(err, Err(DataError::InvalidSchema(_))));
        let dup = Schema::new(vec![
            ColumnSpec::label("y", strings(&["0"])),
            ColumnSpec::categorical("a", strings(&["x", "x"])),
        ]);
        assert!(matches!(dup, Err(DataError::InvalidSchema(_))));
    }

    #[test]
    fn features_skip_label() {
        let ds = small();
        assert_eq!(ds.p(), 2);
        assert_eq!(ds.schema().feature(1).name, "b");
        assert_eq!(ds.schema().feature_position(1), 2);
        assert_eq!(ds.decode_row(0), strings(&["red", "0", "z"]));
    }

    #[test]
    fn one_hot_width_and_rows() {
        let m = one_hot(&small()).unwrap();
        assert_eq!(m.cols(), 5);
        assert_eq!(m.names[0], "a=red");
        assert_eq!(m.names[4], "b=z");
        for r in 0..m.rows {
            assert_eq!(m.row(r).iter().sum::<f64>(), 2.0);
        }
        assert_eq!(m.row(1), &[0.0, 1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn one_hot_single_column_three_categories() {
        let schema = Schema::new(vec![
            ColumnSpec::categorical("a", strings(&["p", "q", "r"])),
            ColumnSpec::label("y", strings(&["0"])),
        ])
        .unwrap();
        let ds = Dataset::new(schema, vec![FeatureColumn::Categorical(vec![2, 0])], vec![0, 0])
            .unwrap();
        let m = one_hot(&ds).unwrap();
        assert_eq!((m.rows, m.cols()), (2, 3));
        assert!((0..2).all(|r| m.row(r).iter().sum::<f64>() == 1.0));
    }

    #[test]
    fn one_hot_rejects_continuous() {
        let schema = Schema::new(vec![
            ColumnSpec::continuous("t"),
            ColumnSpec::label("y", strings(&["0"])),
        ])
        .unwrap();
        let ds = Dataset::new(schema, vec![FeatureColumn::Continuous(vec![1.5])], vec![0]).unwrap();
        assert_eq!(one_hot(&ds), Err(DataError::ContinuousPresent("t".into())));
    }

    #[test]
    fn dataset_validates_ids() {
        let schema = small().schema().clone();
        let bad = Dataset::new(
            schema.clone(),
            vec![
                FeatureColumn::Categorical(vec![3]),
                FeatureColumn::Categorical(vec![0]),
            ],
            vec![0],
        );
        assert!(matches!(bad, Err(DataError::Invalid(_))));
        let empty = Dataset::new(
            schema,
            vec![FeatureColumn::Categorical(vec![]), FeatureColumn::Categorical(vec![])],
            vec![],
        );
        assert_eq!(empty, Err(DataError::EmptyDataset));
    }

    #[test]
    fn select_rows_repeats() {
        let ds = small().select_rows(&[1, 1, 0]).unwrap();
        assert_eq!(ds.labels(), &[1, 1, 0]);
        assert_eq!(ds.class_totals(), vec![1, 2]);
    }
}
