//! Brute-force reference miner.
//!
//! Counts every one- and two-item class itemset directly, without candidate
//! pruning or heaps, then applies the same total order and capacities as the
//! miner by sorting. Only meant for small inputs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::dataset::Dataset;
use crate::miner::{Antecedent, ClassItemset, Item, MiningConfig};
use crate::rules::{self, Rule, RuleError};

pub const MAX_ROWS: usize = 2000;
pub const MAX_FEATURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("input too large for brute force: n={n}, p={p}")]
    TooLarge { n: usize, p: usize },
    #[error("brute force needs categorical features")]
    ContinuousPresent,
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Every class itemset of a dataset with exact counts.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub classes: usize,
    pub n: u64,
    pub class_totals: Vec<u64>,
    /// All one- and two-item class itemsets, zero supports included.
    pub itemsets: Vec<ClassItemset>,
    /// Per-class counts for every antecedent.
    pub antecedent_counts: BTreeMap<Antecedent, Vec<u64>>,
}

pub fn enumerate(ds: &Dataset) -> Result<Enumeration, OracleError> {
    let (n, p) = (ds.n(), ds.p());
    if n > MAX_ROWS || p > MAX_FEATURES {
        return Err(OracleError::TooLarge { n, p });
    }
    let cols = ds
        .categorical_columns()
        .map_err(|_| OracleError::ContinuousPresent)?;
    let sizes: Vec<u32> = ds
        .schema()
        .features()
        .map(|c| c.categories.len() as u32)
        .collect();
    let classes = ds.num_classes();
    let labels = ds.labels();

    let mut antecedent_counts: BTreeMap<Antecedent, Vec<u64>> = BTreeMap::new();
    // item -> dense position, used for ranks
    let mut position: BTreeMap<Item, u64> = BTreeMap::new();
    for f in 0..p {
        for cat in 0..sizes[f] {
            let item = Item::new(f as u32, cat);
            position.insert(item, position.len() as u64);
            antecedent_counts.insert(Antecedent::single(item), vec![0; classes]);
        }
    }
    for f1 in 0..p {
        for f2 in f1 + 1..p {
            for c1 in 0..sizes[f1] {
                for c2 in 0..sizes[f2] {
                    let a = Antecedent::pair(Item::new(f1 as u32, c1), Item::new(f2 as u32, c2))
                        .unwrap();
                    antecedent_counts.insert(a, vec![0; classes]);
                }
            }
        }
    }
    for r in 0..n {
        let y = labels[r] as usize;
        for f1 in 0..p {
            let i1 = Item::new(f1 as u32, cols[f1][r]);
            antecedent_counts.get_mut(&Antecedent::single(i1)).unwrap()[y] += 1;
            for f2 in f1 + 1..p {
                let i2 = Item::new(f2 as u32, cols[f2][r]);
                antecedent_counts
                    .get_mut(&Antecedent::pair(i1, i2).unwrap())
                    .unwrap()[y] += 1;
            }
        }
    }

    let universe = position.len() as u64 * classes as u64;
    let single_rank = |item: &Item, class: usize| position[item] * classes as u64 + class as u64;
    let mut itemsets = Vec::new();
    for (a, counts) in &antecedent_counts {
        for (class, &support) in counts.iter().enumerate() {
            let rank = match a.items() {
                [i] => single_rank(i, class),
                [i, j] => {
                    let (ri, rj) = (single_rank(i, class), single_rank(j, class));
                    universe + ri.min(rj) * universe + ri.max(rj)
                }
                _ => unreachable!(),
            };
            itemsets.push(ClassItemset {
                antecedent: *a,
                class: class as u32,
                support,
                rank,
            });
        }
    }
    itemsets.sort_by_key(|s| s.rank);

    let mut class_totals = vec![0u64; classes];
    for &y in labels {
        class_totals[y as usize] += 1;
    }
    Ok(Enumeration {
        classes,
        n: n as u64,
        class_totals,
        itemsets,
        antecedent_counts,
    })
}

fn by_support(a: &ClassItemset, b: &ClassItemset) -> Ordering {
    b.support.cmp(&a.support).then(a.rank.cmp(&b.rank))
}

impl Enumeration {
    /// Reference frequent itemsets: per class (or one global list) the
    /// nonzero itemsets sorted by (support desc, rank asc), truncated.
    pub fn topk(&self, config: &MiningConfig) -> Vec<Vec<ClassItemset>> {
        let groups = if config.per_class { self.classes } else { 1 };
        let cap = if config.per_class {
            (config.d_freq / self.classes).max(1)
        } else {
            config.d_freq
        };
        (0..groups)
            .map(|g| {
                let mut v: Vec<ClassItemset> = self
                    .itemsets
                    .iter()
                    .filter(|s| s.support > 0 && (!config.per_class || s.class as usize == g))
                    .copied()
                    .collect();
                v.sort_by(by_support);
                v.truncate(cap);
                v
            })
            .collect()
    }

    pub fn rule(&self, s: &ClassItemset, epsilon: f64) -> Result<Rule, OracleError> {
        let counts = &self.antecedent_counts[&s.antecedent];
        let support = counts[s.class as usize];
        let total: u64 = counts.iter().sum();
        let class_total = self.class_totals[s.class as usize];
        let confidence = rules::confidence(support, counts)?;
        Ok(Rule {
            antecedent: s.antecedent,
            class: s.class,
            support,
            antecedent_counts: counts.clone(),
            confidence,
            rconf: rules::relative_confidence(support, total, class_total, self.n, epsilon),
            lift: rules::lift(confidence, class_total, self.n)?,
            rank: s.rank,
        })
    }

    /// Reference rule selection for `config`, from [`Enumeration::topk`].
    pub fn reference_rules(&self, config: &MiningConfig) -> Result<Vec<Rule>, OracleError> {
        let frequent = self.topk(config);
        let score = |r: &Rule| r.score(config.scoring);
        let mut pool: Vec<Rule> = Vec::new();
        if config.reluctant {
            for class in 0..self.classes as u32 {
                let mut mine: Vec<ClassItemset> = frequent
                    .iter()
                    .flatten()
                    .filter(|s| s.class == class)
                    .copied()
                    .collect();
                mine.sort_by(by_support);
                for s in &mine {
                    let rule = self.rule(s, config.epsilon)?;
                    if s.antecedent.is_pair() {
                        let blocked = s.antecedent.items().iter().any(|item| {
                            pool.iter().any(|q| {
                                q.class == class
                                    && q.antecedent == Antecedent::single(*item)
                                    && score(&rule) <= score(q)
                            })
                        });
                        if blocked {
                            continue;
                        }
                    }
                    pool.push(rule);
                }
            }
        } else {
            for s in frequent.iter().flatten() {
                pool.push(self.rule(s, config.epsilon)?);
            }
        }
        pool.sort_by(|a, b| score(b).total_cmp(&score(a)).then(a.rank.cmp(&b.rank)));
        pool.truncate(config.d_conf);
        Ok(pool)
    }

    /// Reference threshold mining: every itemset with support and confidence
    /// at or above the thresholds, in rank order.
    pub fn threshold_rules(
        &self,
        minsupp: f64,
        minconf: f64,
        epsilon: f64,
    ) -> Result<Vec<Rule>, OracleError> {
        let mut out = Vec::new();
        for s in &self.itemsets {
            if s.support == 0 || (s.support as f64) + 1e-9 < minsupp * self.n as f64 {
                continue;
            }
            let rule = self.rule(s, epsilon)?;
            if rule.confidence + 1e-12 >= minconf {
                out.push(rule);
            }
        }
        Ok(out)
    }
}

/// Reference frequent itemsets for `config`.
pub fn brute_force_topk(
    ds: &Dataset,
    config: &MiningConfig,
) -> Result<Vec<Vec<ClassItemset>>, OracleError> {
    Ok(enumerate(ds)?.topk(config))
}
