//! JSON documents read and written by the command-line tool.

use std::path::Path;

use araf_core::dataset::Dataset;
use araf_core::discretize::{ColumnMap, DiscretizationMap, IntervalMap};
use araf_core::features::{FeatureMode, FeatureSpec};
use araf_core::miner::{Antecedent, ClassItemset, Item};
use araf_core::rules::Rule;
use serde::{Deserialize, Serialize};

use crate::error::AppError;

/// One `X_i = x_i` condition. `feature`/`category` are ids in the mined
/// dataset; `column`/`value` are the names used to resolve it elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub feature: u32,
    pub category: u32,
    pub column: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleRecord {
    pub antecedent: Vec<ItemRecord>,
    pub class: u32,
    pub label: String,
    pub support: u64,
    pub confidence: f64,
    pub rconf: f64,
    pub lift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsampleRecord {
    pub n_prime: usize,
    pub seed: u64,
    pub with_replacement: bool,
}

/// Facts about the mining run stored with its rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulesMetadata {
    /// `fixed-size` or `threshold`.
    pub mode: String,
    pub n: usize,
    pub p: usize,
    pub classes: usize,
    pub subsample: Option<SubsampleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulesFile {
    pub metadata: RulesMetadata,
    pub rules: Vec<RuleRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequentRecord {
    pub items: Vec<ItemIds>,
    pub class: u32,
    pub support: u64,
    pub rank: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemIds {
    pub feature: u32,
    pub category: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub column: String,
    pub k: usize,
    pub thresholds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationFile {
    pub columns: Vec<IntervalRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRecord {
    Label,
    Onehot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpecFile {
    pub mode: ModeRecord,
    /// Each feature as its conditions in `column`/`value` form.
    pub features: Vec<Vec<ItemRecord>>,
    pub discretization: Option<DiscretizationFile>,
}

pub fn item_record(ds: &Dataset, item: Item) -> ItemRecord {
    let spec = ds.schema().feature(item.feature as usize);
    ItemRecord {
        feature: item.feature,
        category: item.category,
        column: spec.name.clone(),
        value: spec.categories[item.category as usize].clone(),
    }
}

pub fn rule_record(ds: &Dataset, rule: &Rule) -> RuleRecord {
    RuleRecord {
        antecedent: rule
            .antecedent
            .items()
            .iter()
            .map(|&i| item_record(ds, i))
            .collect(),
        class: rule.class,
        label: ds.schema().label().categories[rule.class as usize].clone(),
        support: rule.support,
        confidence: rule.confidence,
        rconf: rule.rconf,
        lift: rule.lift,
    }
}

pub fn frequent_record(s: &ClassItemset) -> FrequentRecord {
    FrequentRecord {
        items: s
            .antecedent
            .items()
            .iter()
            .map(|i| ItemIds {
                feature: i.feature,
                category: i.category,
            })
            .collect(),
        class: s.class,
        support: s.support,
        rank: s.rank,
    }
}

/// Resolves name-based conditions against `ds`.
pub fn resolve_antecedent(ds: &Dataset, items: &[ItemRecord]) -> Result<Antecedent, AppError> {
    let resolve = |r: &ItemRecord| -> Result<Item, AppError> {
        let f = ds.schema().feature_index(&r.column).ok_or_else(|| {
            AppError::Data(format!("schema mismatch: unknown column `{}`", r.column))
        })?;
        let c = ds.schema().feature(f).category_id(&r.value).ok_or_else(|| {
            AppError::Data(format!(
                "schema mismatch: column `{}` has no category `{}`",
                r.column, r.value
            ))
        })?;
        Ok(Item::new(f as u32, c))
    };
    match items {
        [a] => Ok(Antecedent::single(resolve(a)?)),
        [a, b] => Antecedent::pair(resolve(a)?, resolve(b)?).ok_or_else(|| {
            AppError::Data(format!("antecedent repeats column `{}`", a.column))
        }),
        _ => Err(AppError::Data(format!(
            "antecedent must have 1 or 2 items, found {}",
            items.len()
        ))),
    }
}

impl From<&DiscretizationMap> for DiscretizationFile {
    fn from(map: &DiscretizationMap) -> Self {
        DiscretizationFile {
            columns: map
                .columns
                .iter()
                .map(|c| IntervalRecord {
                    column: c.column.clone(),
                    k: c.map.k(),
                    thresholds: c.map.thresholds().to_vec(),
                })
                .collect(),
        }
    }
}

impl DiscretizationFile {
    pub fn to_map(&self, path: &Path) -> Result<DiscretizationMap, AppError> {
        let mut columns = Vec::with_capacity(self.columns.len());
        for c in &self.columns {
            let map = IntervalMap::new(c.thresholds.clone()).map_err(|e| AppError::format(path, e))?;
            if map.k() != c.k {
                return Err(AppError::format(
                    path,
                    format!("column `{}`: k={} but {} thresholds", c.column, c.k, c.thresholds.len()),
                ));
            }
            columns.push(ColumnMap {
                column: c.column.clone(),
                map,
            });
        }
        Ok(DiscretizationMap { columns })
    }
}

impl FeatureSpecFile {
    pub fn from_spec(ds: &Dataset, spec: &FeatureSpec) -> Self {
        FeatureSpecFile {
            mode: match spec.mode {
                FeatureMode::AppendToLabelEncoded => ModeRecord::Label,
                FeatureMode::AppendInteractionsToOneHot => ModeRecord::Onehot,
            },
            features: spec
                .features()
                .iter()
                .map(|a| a.items().iter().map(|&i| item_record(ds, i)).collect())
                .collect(),
            discretization: spec.discretization.as_ref().map(DiscretizationFile::from),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| AppError::format(path, e))
}
