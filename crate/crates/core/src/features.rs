//! Rule antecedents as binary features.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dataset::{one_hot, DataError, Dataset, FeatureColumn, FeatureMatrix};
use crate::discretize::DiscretizationMap;
use crate::miner::Antecedent;
use crate::rules::Rule;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeatureError {
    #[error("feature refers to {0}, which the dataset does not have")]
    SchemaMismatch(String),
    #[error("column `{0}` is continuous; discretize it first")]
    ContinuousPresent(String),
}

impl From<DataError> for FeatureError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::ContinuousPresent(c) => FeatureError::ContinuousPresent(c),
            other => FeatureError::SchemaMismatch(format!("{other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureMode {
    /// Label-encoded original columns followed by every generated feature.
    AppendToLabelEncoded,
    /// One-hot expansion followed by the interaction (pair) features only.
    AppendInteractionsToOneHot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    features: Vec<Antecedent>,
    pub mode: FeatureMode,
    pub discretization: Option<DiscretizationMap>,
}

impl FeatureSpec {
    pub fn new(mode: FeatureMode) -> Self {
        FeatureSpec {
            features: Vec::new(),
            mode,
            discretization: None,
        }
    }

    /// Adds `antecedent` unless already present or excluded by the mode.
    pub fn push(&mut self, antecedent: Antecedent) -> bool {
        if self.mode == FeatureMode::AppendInteractionsToOneHot && !antecedent.is_pair() {
            return false;
        }
        if self.features.contains(&antecedent) {
            return false;
        }
        self.features.push(antecedent);
        true
    }

    pub fn features(&self) -> &[Antecedent] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Distinct antecedents of `rules` in rule order; consequents are dropped.
pub fn generate_features(rules: &[Rule], mode: FeatureMode) -> FeatureSpec {
    let mut spec = FeatureSpec::new(mode);
    for r in rules {
        spec.push(r.antecedent);
    }
    spec
}

/// Display name such as `X1=1&X2=0`, from the schema's column and category names.
pub fn feature_name(ds: &Dataset, antecedent: &Antecedent) -> Result<String, FeatureError> {
    let mut parts = Vec::with_capacity(2);
    for item in antecedent.items() {
        let f = item.feature as usize;
        if f >= ds.p() {
            return Err(FeatureError::SchemaMismatch(format!("feature index {f}")));
        }
        let spec = ds.schema().feature(f);
        let cat = spec
            .categories
            .get(item.category as usize)
            .ok_or_else(|| {
                FeatureError::SchemaMismatch(format!(
                    "category id {} of column `{}`",
                    item.category, spec.name
                ))
            })?;
        parts.push(format!("{}={}", spec.name, cat));
    }
    Ok(parts.join("&"))
}

fn check(ds: &Dataset, antecedent: &Antecedent) -> Result<(), FeatureError> {
    feature_name(ds, antecedent)?;
    for item in antecedent.items() {
        if let FeatureColumn::Continuous(_) = ds.feature(item.feature as usize) {
            return Err(FeatureError::ContinuousPresent(
                ds.schema().feature(item.feature as usize).name.clone(),
            ));
        }
    }
    Ok(())
}

/// Base columns for `spec.mode` followed by one indicator per feature.
///
/// Label-encoded base columns carry category ids (continuous columns pass
/// through unchanged); the one-hot base requires all-categorical input.
pub fn transform(ds: &Dataset, spec: &FeatureSpec) -> Result<FeatureMatrix, FeatureError> {
    for a in spec.features() {
        check(ds, a)?;
    }
    let mut base = match spec.mode {
        FeatureMode::AppendToLabelEncoded => label_encoded(ds),
        FeatureMode::AppendInteractionsToOneHot => one_hot(ds)?,
    };
    let appended: Vec<&Antecedent> = spec
        .features()
        .iter()
        .filter(|a| spec.mode == FeatureMode::AppendToLabelEncoded || a.is_pair())
        .collect();
    if appended.is_empty() {
        return Ok(base);
    }
    let columns: Vec<&[u32]> = ds
        .features()
        .iter()
        .map(|c| c.as_categorical().unwrap_or(&[]))
        .collect();
    let old_width = base.cols();
    let width = old_width + appended.len();
    let mut values = Vec::with_capacity(ds.n() * width);
    for r in 0..ds.n() {
        values.extend_from_slice(base.row(r));
        for a in &appended {
            values.push(if a.matches(&columns, r) { 1.0 } else { 0.0 });
        }
    }
    for a in &appended {
        base.names.push(feature_name(ds, a)?);
    }
    base.values = values;
    Ok(base)
}

fn label_encoded(ds: &Dataset) -> FeatureMatrix {
    let names = ds.schema().features().map(|c| c.name.clone()).collect();
    let p = ds.p();
    let mut values = alloc::vec![0.0; ds.n() * p];
    for (f, col) in ds.features().iter().enumerate() {
        match col {
            FeatureColumn::Categorical(ids) => {
                for (r, &id) in ids.iter().enumerate() {
                    values[r * p + f] = id as f64;
                }
            }
            FeatureColumn::Continuous(v) => {
                for (r, &x) in v.iter().enumerate() {
                    values[r * p + f] = x;
                }
            }
        }
    }
    FeatureMatrix {
        names,
        rows: ds.n(),
        values,
    }
}

/// Only the generated indicator columns, without base columns.
pub fn indicators(ds: &Dataset, features: &[Antecedent]) -> Result<FeatureMatrix, FeatureError> {
    for a in features {
        check(ds, a)?;
    }
    let columns: Vec<&[u32]> = ds
        .features()
        .iter()
        .map(|c| c.as_categorical().unwrap_or(&[]))
        .collect();
    let mut values = Vec::with_capacity(ds.n() * features.len());
    for r in 0..ds.n() {
        for a in features {
            values.push(if a.matches(&columns, r) { 1.0 } else { 0.0 });
        }
    }
    Ok(FeatureMatrix {
        names: features
            .iter()
            .map(|a| feature_name(ds, a))
            .collect::<Result<_, _>>()?,
        rows: ds.n(),
        values,
    })
}

/// `(d_freq, d_conf) = (5 |C| floor(sqrt p), 5 floor(sqrt p))`.
pub fn suggest_params(p: usize, num_classes: usize) -> (usize, usize) {
    let root = p.isqrt().max(1);
    (5 * num_classes * root, 5 * root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suggested_parameters() {
        assert_eq!(suggest_params(100, 3), (150, 50));
        assert_eq!(suggest_params(1, 2), (10, 5));
        assert_eq!(suggest_params(99, 3), (135, 45));
    }
}
