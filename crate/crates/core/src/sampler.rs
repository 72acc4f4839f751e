//! Uniform subsampling for non-exhaustive mining.
//!
//! Frequencies estimated from `n'` records drawn with replacement concentrate
//! around the true frequencies at the Hoeffding rate, so two itemsets whose
//! frequencies differ by `eps` are misordered with probability at most
//! `4 exp(-n' eps^2 / 2)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dataset::{DataError, Dataset};
use crate::miner::{itemset_frequency, Antecedent, MiningError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Mining(#[from] MiningError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsampleConfig {
    pub n_prime: usize,
    pub seed: u64,
    pub with_replacement: bool,
}

impl SubsampleConfig {
    pub fn new(n_prime: usize, seed: u64) -> Self {
        SubsampleConfig {
            n_prime,
            seed,
            with_replacement: true,
        }
    }
}

/// Row indices of a subsample; deterministic in `config.seed`.
pub fn sample_indices(n: usize, config: &SubsampleConfig) -> Result<Vec<usize>, SampleError> {
    if config.n_prime == 0 {
        return Err(SampleError::InvalidArgument("n' must be at least 1".into()));
    }
    if n == 0 {
        return Err(SampleError::Data(DataError::EmptyDataset));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    if config.with_replacement {
        Ok((0..config.n_prime).map(|_| rng.random_range(0..n)).collect())
    } else {
        if config.n_prime > n {
            return Err(SampleError::InvalidArgument(format!(
                "cannot draw {} of {n} records without replacement",
                config.n_prime
            )));
        }
        Ok(index::sample(&mut rng, n, config.n_prime).into_vec())
    }
}

/// `n'` records drawn uniformly (with replacement by default).
pub fn subsample(ds: &Dataset, config: &SubsampleConfig) -> Result<Dataset, SampleError> {
    let rows = sample_indices(ds.n(), config)?;
    Ok(ds.select_rows(&rows)?)
}

/// Smallest `n'` with `4 exp(-n' eps^2 / 2) <= delta`.
pub fn required_sample_size(epsilon: f64, delta: f64) -> Result<u64, SampleError> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(SampleError::InvalidArgument(format!(
            "need 0 < epsilon < 1 and 0 < delta < 1 (epsilon={epsilon}, delta={delta})"
        )));
    }
    Ok(libm::ceil(2.0 * libm::log(4.0 / delta) / (epsilon * epsilon)) as u64)
}

/// Misordering bound `4 exp(-n' eps^2 / 2)` for a frequency gap `epsilon`.
pub fn misorder_bound(n_prime: u64, epsilon: f64) -> f64 {
    4.0 * libm::exp(-(n_prime as f64) * epsilon * epsilon / 2.0)
}

/// Frequencies of `itemsets` (optionally joined with a class) on a subsample.
pub fn estimate_frequencies(
    ds: &Dataset,
    itemsets: &[(Antecedent, Option<u32>)],
    config: &SubsampleConfig,
) -> Result<Vec<f64>, SampleError> {
    let sample = subsample(ds, config)?;
    itemsets
        .iter()
        .map(|(a, c)| itemset_frequency(&sample, a, *c).map_err(SampleError::from))
        .collect()
}
