//! Synthetic experiment protocol.
//!
//! Each S1/S2 trial generates a dataset from its seed, mines it with the
//! three pipelines (global confidence, per-class relative confidence, and
//! per-class relative confidence with the reluctant gate), and scores
//! logistic regression on a 70/30 stratified split: once on the original
//! columns and once per pipeline on the indicator columns of its rules,
//! mined from the training part only.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{DataError, Dataset, FeatureMatrix};
use crate::features::{generate_features, indicators, FeatureError, FeatureMode};
use crate::logreg::{train_logreg, LogRegConfig, LogRegError};
use crate::miner::{mine_frequent, Antecedent, ClassItemset, Item, MiningConfig, MiningError};
use crate::pipeline::{mine_rules, PipelineError};
use crate::rules::Rule;
use crate::sampler::{subsample, SampleError, SubsampleConfig};
use crate::synth::{generate, SynthConfig, SynthError, Variant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Mining(#[from] MiningError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    LogReg(#[from] LogRegError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Origin,
    Alg4,
    Alg5,
    Alg6,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Origin, Method::Alg4, Method::Alg5, Method::Alg6];
    pub const MINED: [Method; 3] = [Method::Alg4, Method::Alg5, Method::Alg6];

    pub fn name(self) -> &'static str {
        match self {
            Method::Origin => "origin",
            Method::Alg4 => "alg4",
            Method::Alg5 => "alg5",
            Method::Alg6 => "alg6",
        }
    }

    /// Mining configuration, `None` for the original columns.
    pub fn config(self, d_freq: usize, d_conf: usize) -> Option<MiningConfig> {
        match self {
            Method::Origin => None,
            Method::Alg4 => Some(MiningConfig::fixed_size(d_freq, d_conf)),
            Method::Alg5 => Some(MiningConfig::unbalanced(d_freq, d_conf)),
            Method::Alg6 => Some(MiningConfig::reluctant(d_freq, d_conf)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub d_freq: usize,
    pub d_conf: usize,
    pub train_fraction: f64,
    pub logreg: LogRegConfig,
    /// Fit logistic regression; off for rule-only runs.
    pub evaluate: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            d_freq: 45,
            d_conf: 5,
            train_fraction: 0.7,
            logreg: LogRegConfig::default(),
            evaluate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub logloss: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub seed: u64,
    /// Rules mined from the whole generated dataset, per mined method.
    pub rules: Vec<(Method, Vec<Rule>)>,
    /// Held-out scores, empty when evaluation is off.
    pub results: Vec<MethodResult>,
}

impl Trial {
    pub fn rules_of(&self, method: Method) -> &[Rule] {
        self.rules
            .iter()
            .find(|(m, _)| *m == method)
            .map_or(&[], |(_, r)| r.as_slice())
    }

    pub fn result_of(&self, method: Method) -> Option<&MethodResult> {
        self.results.iter().find(|r| r.method == method)
    }
}

/// Independent stream of a seed for a sub-task.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-class shuffled split; each class contributes `round(fraction * size)`
/// rows to the training part. Both index lists are sorted.
pub fn stratified_split(
    labels: &[u32],
    classes: usize,
    fraction: f64,
    seed: u64,
) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class: Vec<Vec<usize>> = alloc::vec![Vec::new(); classes];
    for (r, &y) in labels.iter().enumerate() {
        by_class[y as usize].push(r);
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for mut rows in by_class {
        rows.shuffle(&mut rng);
        let cut = libm::round(fraction * rows.len() as f64) as usize;
        train.extend_from_slice(&rows[..cut]);
        test.extend_from_slice(&rows[cut..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

fn label_encoded(ds: &Dataset) -> Result<FeatureMatrix, FeatureError> {
    let spec = crate::features::FeatureSpec::new(FeatureMode::AppendToLabelEncoded);
    crate::features::transform(ds, &spec)
}

fn score(
    train: &FeatureMatrix,
    train_y: &[u32],
    test: &FeatureMatrix,
    test_y: &[u32],
    classes: usize,
    method: Method,
    config: &LogRegConfig,
) -> Result<MethodResult, BenchError> {
    let model = train_logreg(train, train_y, classes, config)?;
    let e = model.evaluate(test, test_y)?;
    Ok(MethodResult {
        method,
        logloss: e.logloss,
        accuracy: e.accuracy,
    })
}

/// One trial on an already generated dataset.
pub fn run_trial_on(ds: &Dataset, seed: u64, config: &BenchConfig) -> Result<Trial, BenchError> {
    let mut rules = Vec::new();
    for method in Method::MINED {
        let cfg = method.config(config.d_freq, config.d_conf).unwrap();
        rules.push((method, mine_rules(ds, &cfg)?.rules));
    }
    let mut results = Vec::new();
    if config.evaluate {
        let classes = ds.num_classes();
        let (tr, te) = stratified_split(ds.labels(), classes, config.train_fraction, derive_seed(seed, 1));
        let train = ds.select_rows(&tr)?;
        let test = ds.select_rows(&te)?;
        results.push(score(
            &label_encoded(&train)?,
            train.labels(),
            &label_encoded(&test)?,
            test.labels(),
            classes,
            Method::Origin,
            &config.logreg,
        )?);
        for method in Method::MINED {
            let cfg = method.config(config.d_freq, config.d_conf).unwrap();
            let mined = mine_rules(&train, &cfg)?;
            let spec = generate_features(&mined.rules, FeatureMode::AppendToLabelEncoded);
            results.push(score(
                &indicators(&train, spec.features())?,
                train.labels(),
                &indicators(&test, spec.features())?,
                test.labels(),
                classes,
                method,
                &config.logreg,
            )?);
        }
    }
    Ok(Trial {
        seed,
        rules,
        results,
    })
}

/// Generates the `variant` dataset for `seed` and runs one trial on it.
pub fn run_trial(variant: Variant, seed: u64, config: &BenchConfig) -> Result<Trial, BenchError> {
    let synth = match variant {
        Variant::S1 => SynthConfig::s1(seed),
        Variant::S2 => SynthConfig::s2(seed),
        Variant::FreqBench => SynthConfig::freq_bench(seed),
    };
    run_trial_on(&generate(&synth)?, seed, config)
}

fn item(feature: u32, value: u32) -> Item {
    Item::new(feature, value)
}

/// The five rules that generate S1 labels, as (antecedent, class):
/// `X1=0 -> 0`, `X1=1,X2=0 -> 1`, `X1=1,X3=0 -> 1`, `X1=1,X2=1 -> 2`,
/// `X1=1,X3=1 -> 2`.
pub fn s1_ground_truth() -> [(Antecedent, u32); 5] {
    let pair = |f: u32, v: u32| Antecedent::pair(item(0, 1), item(f, v)).unwrap();
    [
        (Antecedent::single(item(0, 0)), 0),
        (pair(1, 0), 1),
        (pair(2, 0), 1),
        (pair(1, 1), 2),
        (pair(2, 1), 2),
    ]
}

/// How often each distinct rule (antecedent, class) was selected.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecoveryCounts {
    pub trials: usize,
    pub counts: BTreeMap<(Antecedent, u32), usize>,
}

impl RecoveryCounts {
    pub fn add(&mut self, rules: &[Rule]) {
        self.trials += 1;
        let mut seen = Vec::new();
        for r in rules {
            let key = (r.antecedent, r.class);
            if !seen.contains(&key) {
                seen.push(key);
                *self.counts.entry(key).or_insert(0) += 1;
            }
        }
    }

    pub fn count(&self, antecedent: &Antecedent, class: u32) -> usize {
        self.counts.get(&(*antecedent, class)).copied().unwrap_or(0)
    }

    /// Entries sorted by count desc, then antecedent and class.
    pub fn sorted(&self) -> Vec<((Antecedent, u32), usize)> {
        let mut v: Vec<_> = self.counts.iter().map(|(k, c)| (*k, *c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }
}

/// The four frequency-benchmark itemsets with their population frequencies:
/// `X1=1` 0.9, `X2=1` 0.8, `X1=1,X2=1` 0.75, `X3=1` 0.7.
pub fn freq_ground_truth() -> [(Antecedent, f64); 4] {
    [
        (Antecedent::single(item(0, 1)), 0.9),
        (Antecedent::single(item(1, 1)), 0.8),
        (Antecedent::pair(item(0, 1), item(1, 1)).unwrap(), 0.75),
        (Antecedent::single(item(2, 1)), 0.7),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqTrial {
    pub seed: u64,
    pub n_prime: usize,
    /// Mined frequent itemsets, best first.
    pub top: Vec<ClassItemset>,
    /// Every ground-truth itemset is among `top`.
    pub recovered: bool,
    /// Mean |estimated - population| frequency over the ground truth; an
    /// itemset missing from `top` counts with its full frequency.
    pub mean_abs_error: f64,
}

/// Mines the `d_freq` most frequent itemsets from `n_prime` records drawn
/// from a frequency-benchmark population generated with `seed`.
pub fn freq_trial(
    population: &SynthConfig,
    n_prime: usize,
    d_freq: usize,
) -> Result<FreqTrial, BenchError> {
    let ds = generate(population)?;
    let sample = subsample(&ds, &SubsampleConfig::new(n_prime, derive_seed(population.seed, 2)))?;
    let config = MiningConfig::fixed_size(d_freq, d_freq);
    let out = mine_frequent(&sample, &config)?;
    let top = out.frequent.into_iter().flatten().collect::<Vec<_>>();
    let mut recovered = true;
    let mut err = 0.0;
    let truth = freq_ground_truth();
    for (a, f) in &truth {
        match top.iter().find(|s| s.antecedent == *a) {
            Some(s) => err += (s.support as f64 / n_prime as f64 - f).abs(),
            None => {
                recovered = false;
                err += f;
            }
        }
    }
    Ok(FreqTrial {
        seed: population.seed,
        n_prime,
        top,
        recovered,
        mean_abs_error: err / truth.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_stratified() {
        let labels: Vec<u32> = (0..100).map(|i| (i % 4 == 0) as u32).collect();
        let (tr, te) = stratified_split(&labels, 2, 0.7, 3);
        assert_eq!(tr.len() + te.len(), 100);
        assert_eq!(tr.iter().filter(|&&r| labels[r] == 1).count(), 18);
        assert_eq!(tr.iter().filter(|&&r| labels[r] == 0).count(), 53);
        assert_eq!(stratified_split(&labels, 2, 0.7, 3), (tr, te));
    }

    #[test]
    fn ground_truth_is_consistent_with_labels() {
        for (a, class) in s1_ground_truth() {
            let x1 = a.items()[0];
            assert_eq!(x1.feature, 0);
            if let [_, other] = a.items() {
                assert_eq!(x1.category, 1);
                assert_eq!(class, 1 + other.category);
            } else {
                assert_eq!(class, 0);
            }
        }
    }
}
