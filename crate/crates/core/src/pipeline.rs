//! Mining and rule selection in one call.

use alloc::vec::Vec;

use thiserror::Error;

use crate::dataset::Dataset;
use crate::miner::{mine_frequent_with, CountPass, MiningConfig, MiningError, MiningOutput, SupportTables};
use crate::rules::{self, Rule, RuleError};
use crate::sampler::{subsample, SampleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Mining(#[from] MiningError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinedRules {
    pub output: MiningOutput,
    pub rules: Vec<Rule>,
}

/// Frequent itemsets (on a subsample when configured), then rule selection.
///
/// With a subsample and `exact_confidence`, the count tables are rebuilt
/// over the full dataset before scoring, so rule statistics are exact while
/// the frequent sets stay approximate.
pub fn mine_rules_with<P: CountPass + ?Sized>(
    ds: &Dataset,
    config: &MiningConfig,
    pass: &P,
) -> Result<MinedRules, PipelineError> {
    config.validate()?;
    let mut output = match &config.subsample {
        Some(sub) => {
            let sample = subsample(ds, sub)?;
            let mut out = mine_frequent_with(&sample, config, pass)?;
            if config.exact_confidence {
                out.tables = SupportTables::count(ds, out.pair_antecedents().iter(), pass)?;
            }
            out
        }
        None => mine_frequent_with(ds, config, pass)?,
    };
    let rules = rules::select(&output, config)?;
    output.per_class = config.per_class;
    Ok(MinedRules { output, rules })
}

pub fn mine_rules(ds: &Dataset, config: &MiningConfig) -> Result<MinedRules, PipelineError> {
    mine_rules_with(ds, config, &crate::miner::Sequential)
}
