#![allow(dead_code)]

use araf_core::dataset::{ColumnSpec, Dataset, FeatureColumn, Schema};
use araf_core::miner::{MiningConfig, Scoring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Categorical dataset with skewed category draws, so supports differ and
/// ties still happen.
pub fn random_dataset(seed: u64, n: usize, p: usize, max_cats: u32, classes: u32) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::new();
    let mut cols = Vec::new();
    for f in 0..p {
        let cats = rng.random_range(1..=max_cats);
        specs.push(ColumnSpec::categorical(
            format!("f{f}"),
            (0..cats).map(|c| format!("c{c}")).collect(),
        ));
        let skew: f64 = rng.random_range(0.0..2.0);
        cols.push(FeatureColumn::Categorical(
            (0..n)
                .map(|_| {
                    let u: f64 = rng.random();
                    ((u.powf(1.0 + skew) * cats as f64) as u32).min(cats - 1)
                })
                .collect(),
        ));
    }
    specs.push(ColumnSpec::label(
        "y",
        (0..classes).map(|c| format!("k{c}")).collect(),
    ));
    let labels = (0..n).map(|_| rng.random_range(0..classes)).collect();
    Dataset::new(Schema::new(specs).unwrap(), cols, labels).unwrap()
}

pub fn random_config(rng: &mut ChaCha8Rng) -> MiningConfig {
    let d_freq = rng.random_range(1..=80);
    let d_conf = rng.random_range(1..=d_freq);
    let scoring = match rng.random_range(0..3) {
        0 => Scoring::Confidence,
        1 => Scoring::RelativeConfidence,
        _ => Scoring::Lift,
    };
    MiningConfig {
        per_class: rng.random_bool(0.5),
        scoring,
        reluctant: rng.random_bool(0.4),
        ..MiningConfig::fixed_size(d_freq, d_conf)
    }
}
