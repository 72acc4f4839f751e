//! Rule scoring and selection.
//!
//! Every frequent class itemset yields one rule, antecedent to its class.
//! Confidence comes straight from the per-class antecedent counts, so scoring
//! never needs another pass over the records.

use alloc::vec::Vec;
use core::cmp::Reverse;

use hashbrown::HashMap;
use thiserror::Error;

use crate::miner::{
    priority_order, Antecedent, ClassItemset, Item, MiningConfig, MiningOutput, Priority, Scoring,
    SupportTables, TopK,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("antecedent never occurs")]
    ZeroAntecedent,
    #[error("class never occurs")]
    ZeroClass,
    #[error("no counts recorded for an antecedent")]
    MissingCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Antecedent,
    pub class: u32,
    /// Records matching the antecedent and the class.
    pub support: u64,
    /// Records matching the antecedent, per class.
    pub antecedent_counts: Vec<u64>,
    pub confidence: f64,
    pub rconf: f64,
    pub lift: f64,
    pub rank: u64,
}

impl Rule {
    /// Scores `itemset` from the count tables.
    pub fn from_itemset(
        itemset: &ClassItemset,
        tables: &SupportTables,
        epsilon: f64,
    ) -> Result<Rule, RuleError> {
        let counts = tables
            .antecedent_counts(&itemset.antecedent)
            .ok_or(RuleError::MissingCounts)?;
        let class = itemset.class as usize;
        let support = counts[class];
        let confidence = confidence(support, counts)?;
        let class_total = tables.class_totals[class];
        let antecedent_total: u64 = counts.iter().sum();
        Ok(Rule {
            antecedent: itemset.antecedent,
            class: itemset.class,
            support,
            antecedent_counts: counts.to_vec(),
            confidence,
            rconf: relative_confidence(support, antecedent_total, class_total, tables.n, epsilon),
            lift: lift(confidence, class_total, tables.n)?,
            rank: itemset.rank,
        })
    }

    pub fn score(&self, scoring: Scoring) -> f64 {
        match scoring {
            Scoring::Confidence => self.confidence,
            Scoring::RelativeConfidence => self.rconf,
            Scoring::Lift => self.lift,
        }
    }
}

/// `supp(X, Y=c) / sum over c' of supp(X, Y=c')`.
pub fn confidence(support: u64, antecedent_counts: &[u64]) -> Result<f64, RuleError> {
    let total: u64 = antecedent_counts.iter().sum();
    if total == 0 {
        return Err(RuleError::ZeroAntecedent);
    }
    Ok(support as f64 / total as f64)
}

/// Posterior class odds over prior class odds, in support form with
/// `epsilon` added to both denominators:
/// `supp(XY) / (supp(X) - supp(XY) + eps) * (n - supp(Y)) / (supp(Y) + eps)`.
pub fn relative_confidence(
    support: u64,
    antecedent_total: u64,
    class_total: u64,
    n: u64,
    epsilon: f64,
) -> f64 {
    let posterior = support as f64 / ((antecedent_total - support) as f64 + epsilon);
    let prior = (n - class_total) as f64 / (class_total as f64 + epsilon);
    posterior * prior
}

/// Confidence over the class frequency `supp(Y) / n`.
pub fn lift(confidence: f64, class_total: u64, n: u64) -> Result<f64, RuleError> {
    if class_total == 0 {
        return Err(RuleError::ZeroClass);
    }
    Ok(confidence / (class_total as f64 / n as f64))
}

struct Scored {
    score: f64,
    rule: Rule,
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct TotalF64(u64);

impl TotalF64 {
    // Order-preserving bit mapping of f64::total_cmp.
    fn new(v: f64) -> Self {
        let bits = v.to_bits();
        let flipped = if bits >> 63 == 1 { !bits } else { bits | (1 << 63) };
        TotalF64(flipped)
    }
}

impl Priority for Scored {
    type Key = (TotalF64, Reverse<u64>);
    fn key(&self) -> Self::Key {
        (TotalF64::new(self.score), Reverse(self.rule.rank))
    }
}

fn top_rules(rules: impl IntoIterator<Item = Rule>, scoring: Scoring, d_conf: usize) -> Vec<Rule> {
    let mut acc = TopK::new(d_conf);
    for rule in rules {
        acc.push(Scored {
            score: rule.score(scoring),
            rule,
        });
    }
    acc.into_sorted_vec().into_iter().map(|s| s.rule).collect()
}

/// The `d_conf` best rules of the frequent itemsets by (score desc, rank asc).
pub fn select_rules(output: &MiningOutput, config: &MiningConfig) -> Result<Vec<Rule>, RuleError> {
    let rules = output
        .itemsets()
        .map(|s| Rule::from_itemset(s, &output.tables, config.epsilon))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(top_rules(rules, config.scoring, config.d_conf))
}

/// Selection with the reluctant gate.
///
/// Classes are visited in id order and each class's itemsets in (support
/// desc, rank asc) order. One-item rules always enter the pool. A pair rule
/// enters only if, for each of its two one-item parents with the same class,
/// the parent is not in the pool or the pair's score is strictly higher.
/// The `d_conf` best pooled rules are returned.
pub fn select_rules_reluctant(
    output: &MiningOutput,
    config: &MiningConfig,
) -> Result<Vec<Rule>, RuleError> {
    let classes = output.tables.class_totals.len();
    let mut by_class: Vec<Vec<ClassItemset>> = alloc::vec![Vec::new(); classes];
    for s in output.itemsets() {
        by_class[s.class as usize].push(*s);
    }
    let mut pool = Vec::new();
    let mut parents: HashMap<(Item, u32), f64> = HashMap::new();
    for (class, mut itemsets) in by_class.into_iter().enumerate() {
        itemsets.sort_by(priority_order);
        for s in &itemsets {
            let rule = Rule::from_itemset(s, &output.tables, config.epsilon)?;
            let score = rule.score(config.scoring);
            if !s.antecedent.is_pair() {
                parents.insert((s.antecedent.items()[0], class as u32), score);
                pool.push(rule);
                continue;
            }
            let admitted = s.antecedent.items().iter().all(|item| {
                parents
                    .get(&(*item, class as u32))
                    .is_none_or(|&parent| score > parent)
            });
            if admitted {
                pool.push(rule);
            }
        }
    }
    Ok(top_rules(pool, config.scoring, config.d_conf))
}

/// Dispatches on `config.reluctant`.
pub fn select(output: &MiningOutput, config: &MiningConfig) -> Result<Vec<Rule>, RuleError> {
    if config.reluctant {
        select_rules_reluctant(output, config)
    } else {
        select_rules(output, config)
    }
}

/// Rules of `itemsets` with confidence at least `minconf`, in input order.
pub fn generate_rules_threshold(
    itemsets: &[ClassItemset],
    tables: &SupportTables,
    minconf: f64,
    epsilon: f64,
) -> Result<Vec<Rule>, RuleError> {
    let mut out = Vec::new();
    for s in itemsets {
        let rule = Rule::from_itemset(s, tables, epsilon)?;
        if rule.confidence + 1e-12 >= minconf {
            out.push(rule);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confidence_examples() {
        // supp(XY)=4 with antecedent totals {c: 4, other: 2}
        assert!((confidence(4, &[4, 2]).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert_eq!(confidence(3, &[3, 0]).unwrap(), 1.0);
        assert_eq!(confidence(0, &[0, 5]).unwrap(), 0.0);
        assert_eq!(confidence(0, &[0, 0]), Err(RuleError::ZeroAntecedent));
    }

    #[test]
    fn relative_confidence_examples() {
        // Odds form: (2/3)/(1/3) / ((1/2)/(1/2)) = 2.
        let odds = (4.0 / 6.0) / (1.0 - 4.0 / 6.0) / ((5.0 / 10.0) / (1.0 - 5.0 / 10.0));
        let r = relative_confidence(4, 6, 5, 10, 1e-12);
        assert!((r - 2.0).abs() < 1e-9);
        assert!((r - odds).abs() < 1e-9);
        // conf equal to the prior carries no information.
        assert!((relative_confidence(3, 10, 30, 100, 1e-12) - 1.0).abs() < 1e-9);
        // conf = 1 and supp(Y) = n stay finite.
        let r = relative_confidence(10, 10, 10, 10, 1e-12);
        assert!(r.is_finite());
        assert!(relative_confidence(7, 7, 20, 50, 1e-12).is_finite());
    }

    #[test]
    fn lift_examples() {
        assert!((lift(0.5, 50, 100).unwrap() - 1.0).abs() < 1e-12);
        assert!((lift(0.9, 30, 100).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(lift(0.0, 30, 100).unwrap(), 0.0);
        assert_eq!(lift(0.5, 0, 100), Err(RuleError::ZeroClass));
    }

    #[test]
    fn total_f64_preserves_order() {
        let vals = [f64::NEG_INFINITY, -2.0, -0.0, 0.0, 1e-300, 0.5, 3.0, f64::INFINITY];
        for w in vals.windows(2) {
            assert!(TotalF64::new(w[0]) < TotalF64::new(w[1]));
        }
    }
}
