//! Seeded synthetic datasets with binary features.
//!
//! - `FreqBench`: `X1 ~ Bern(0.9)`, `P(X2=1 | X1=1) = 75/90`,
//!   `P(X2=1 | X1=0) = 0.5`, `X3 ~ Bern(0.7)`, remaining features
//!   `Bern(0.5)`; every record has label `1`.
//! - `S1`: `X1 ~ Bern(0.3)`, others `Bern(0.5)`; `Y = 0` if `X1 = 0`,
//!   `Y = 2` if `X1 = X2 = X3 = 1`, else `Y = 1`. A `noise_rate` share of
//!   records then gets a label drawn uniformly from `{0, 1, 2}`.
//! - `S2`: `S1` with the last two features fixed to `1`.
//!
//! Feature `Xk` has categories `["0", "1"]`, so the category id equals the
//! bit value.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{ColumnSpec, DataError, Dataset, FeatureColumn, Schema};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    FreqBench,
    S1,
    S2,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid synthetic configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    pub p: usize,
    pub variant: Variant,
    pub noise_rate: f64,
    pub seed: u64,
}

impl SynthConfig {
    /// 1000 records, 99 features, 5% label noise.
    pub fn s1(seed: u64) -> Self {
        SynthConfig {
            n: 1000,
            p: 99,
            variant: Variant::S1,
            noise_rate: 0.05,
            seed,
        }
    }

    pub fn s2(seed: u64) -> Self {
        SynthConfig {
            variant: Variant::S2,
            ..Self::s1(seed)
        }
    }

    /// 10000 records, 10 features.
    pub fn freq_bench(seed: u64) -> Self {
        SynthConfig {
            n: 10_000,
            p: 10,
            variant: Variant::FreqBench,
            noise_rate: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        if self.p < 3 {
            return Err(SynthError::InvalidConfig(format!("p must be >= 3, got {}", self.p)));
        }
        if self.n == 0 {
            return Err(SynthError::InvalidConfig("n must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.noise_rate) {
            return Err(SynthError::InvalidConfig(format!(
                "noise_rate must lie in [0, 1], got {}",
                self.noise_rate
            )));
        }
        Ok(())
    }
}

fn bern(rng: &mut ChaCha8Rng, p: f64) -> u32 {
    (rng.random::<f64>() < p) as u32
}

fn binary_schema(p: usize, classes: &[&str]) -> Result<Schema, DataError> {
    let bits = || vec!["0".to_string(), "1".to_string()];
    let mut cols: Vec<ColumnSpec> = (1..=p)
        .map(|k| ColumnSpec::categorical(format!("X{k}"), bits()))
        .collect();
    cols.push(ColumnSpec::label(
        "Y",
        classes.iter().map(|c| c.to_string()).collect(),
    ));
    Schema::new(cols)
}

/// Deterministic S1 label of a record.
pub fn s1_label(x1: u32, x2: u32, x3: u32) -> u32 {
    match (x1, x2 & x3) {
        (0, _) => 0,
        (_, 0) => 1,
        _ => 2,
    }
}

fn gen_s(config: &SynthConfig, constant_tail: bool) -> Result<Dataset, SynthError> {
    config.validate()?;
    let (n, p) = (config.n, config.p);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cols = vec![vec![0u32; n]; p];
    for r in 0..n {
        cols[0][r] = bern(&mut rng, 0.3);
        for col in cols.iter_mut().skip(1) {
            col[r] = bern(&mut rng, 0.5);
        }
    }
    if constant_tail {
        for col in cols.iter_mut().skip(p - 2) {
            col.fill(1);
        }
    }
    let mut labels: Vec<u32> = (0..n)
        .map(|r| s1_label(cols[0][r], cols[1][r], cols[2][r]))
        .collect();
    let noisy = libm::round(config.noise_rate * n as f64) as usize;
    for r in index::sample(&mut rng, n, noisy) {
        labels[r] = rng.random_range(0..3);
    }
    Ok(Dataset::new(
        binary_schema(p, &["0", "1", "2"])?,
        cols.into_iter().map(FeatureColumn::Categorical).collect(),
        labels,
    )?)
}

pub fn gen_s1(config: &SynthConfig) -> Result<Dataset, SynthError> {
    gen_s(config, false)
}

/// S1 where `X_{p-1}` and `X_p` are always `1` (X98, X99 at `p = 99`).
pub fn gen_s2(config: &SynthConfig) -> Result<Dataset, SynthError> {
    gen_s(config, true)
}

pub fn gen_freq_bench(config: &SynthConfig) -> Result<Dataset, SynthError> {
    config.validate()?;
    let (n, p) = (config.n, config.p);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cols = vec![vec![0u32; n]; p];
    for r in 0..n {
        let x1 = bern(&mut rng, 0.9);
        cols[0][r] = x1;
        cols[1][r] = bern(&mut rng, if x1 == 1 { 75.0 / 90.0 } else { 0.5 });
        cols[2][r] = bern(&mut rng, 0.7);
        for col in cols.iter_mut().skip(3) {
            col[r] = bern(&mut rng, 0.5);
        }
    }
    Ok(Dataset::new(
        binary_schema(p, &["1"])?,
        cols.into_iter().map(FeatureColumn::Categorical).collect(),
        vec![0; n],
    )?)
}

pub fn generate(config: &SynthConfig) -> Result<Dataset, SynthError> {
    match config.variant {
        Variant::FreqBench => gen_freq_bench(config),
        Variant::S1 => gen_s1(config),
        Variant::S2 => gen_s2(config),
    }
}
