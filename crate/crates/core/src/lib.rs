//! Class association rule mining as a feature generator.
//!
//! The crate mines class association rules with one- and two-item
//! antecedents from categorical data and turns the selected antecedents into
//! binary main-effect and interaction features. Mining is bounded by two
//! capacities instead of support/confidence thresholds: `d_freq` frequent
//! itemsets and `d_conf` confident rules.
//!
//! Pipeline overview:
//!
//! - [`dataset`]: column-typed tables, categorical encoding, one-hot expansion.
//! - [`discretize`]: supervised information-gain binning of continuous columns.
//! - [`miner`]: support counting and fixed-capacity Top-K itemset selection.
//! - [`rules`]: confidence / relative confidence / lift scoring and rule
//!   selection, including the reluctant redundancy filter.
//! - [`features`]: rule antecedents to indicator columns.
//! - [`pipeline`]: subsampling, mining and rule selection in one call.
//! - [`sampler`]: subsampled mining with Hoeffding-style sample sizing.
//! - [`synth`], [`oracle`], [`logreg`], [`bench`]: synthetic generators, a
//!   brute-force reference miner and a small evaluator.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bench;
pub mod dataset;
pub mod discretize;
pub mod features;
pub mod logreg;
pub mod miner;
pub mod oracle;
pub mod pipeline;
pub mod rules;
pub mod sampler;
pub mod synth;

pub use dataset::{ColumnKind, ColumnSpec, Dataset, DataError, FeatureColumn, Schema};
pub use discretize::{DiscretizationMap, IntervalMap};
pub use features::{FeatureMode, FeatureSpec};
pub use miner::{
    Antecedent, ClassItemset, Item, MiningConfig, MiningError, MiningOutput, Scoring,
    TopKAccumulator,
};
pub use rules::Rule;
pub use sampler::SubsampleConfig;

/// Identifier of the pseudo-random generator used everywhere a seed is taken.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9)";
