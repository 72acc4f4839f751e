//! Supervised discretization of continuous features.
//!
//! A column is cut into `k` intervals by `k - 1` greedy rounds. Every round
//! proposes the `l`-quantiles of each current interval as split points and
//! commits the one giving the largest information gain of the whole
//! partition. Intervals are left-open and right-closed: interval `i` is
//! `(t[i-1], t[i]]` with `t[-1] = -inf` and `t[k-1] = +inf`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::dataset::{ColumnSpec, DataError, Dataset, FeatureColumn};

/// Default number of quantiles examined per interval and round.
pub const DEFAULT_QUANTILES: usize = 10;

const IG_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscretizeError {
    #[error("all class counts are zero")]
    AllZero,
    #[error("empty input")]
    EmptyInput,
    #[error("length mismatch: {0} values, {1} labels")]
    LengthMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{rows} rows cannot be cut into {k} intervals")]
    InsufficientRows { rows: usize, k: usize },
    #[error("non-finite value in input")]
    NonFinite,
    /// Fewer distinct values than requested intervals. `partial` holds every
    /// threshold that could be placed.
    #[error("feature has too few distinct values; {} thresholds placed", partial.thresholds().len())]
    DegenerateFeature { partial: IntervalMap },
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Shannon entropy in bits of a class-count vector.
pub fn entropy(class_counts: &[u64]) -> Result<f64, DiscretizeError> {
    if class_counts.iter().all(|&c| c == 0) {
        return Err(DiscretizeError::AllZero);
    }
    Ok(entropy_of(class_counts))
}

fn entropy_of(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total;
            h -= p * libm::log2(p);
        }
    }
    // -0.0 for pure sets
    h.max(0.0)
}

/// Information gain of splitting `labels` into the parts given by `partition`.
pub fn info_gain(labels: &[u32], partition: &[usize]) -> Result<f64, DiscretizeError> {
    if labels.is_empty() {
        return Err(DiscretizeError::EmptyInput);
    }
    if labels.len() != partition.len() {
        return Err(DiscretizeError::LengthMismatch(partition.len(), labels.len()));
    }
    let classes = *labels.iter().max().unwrap() as usize + 1;
    let parts = *partition.iter().max().unwrap() + 1;
    let mut whole = vec![0u64; classes];
    let mut split = vec![0u64; parts * classes];
    for (&y, &part) in labels.iter().zip(partition) {
        whole[y as usize] += 1;
        split[part * classes + y as usize] += 1;
    }
    let n = labels.len() as f64;
    let mut gain = entropy_of(&whole);
    for chunk in split.chunks(classes) {
        let size: u64 = chunk.iter().sum();
        gain -= size as f64 / n * entropy_of(chunk);
    }
    Ok(gain.max(0.0))
}

/// Sorted thresholds of one discretized column.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMap {
    thresholds: Vec<f64>,
}

impl IntervalMap {
    pub fn new(thresholds: Vec<f64>) -> Result<Self, DiscretizeError> {
        if thresholds.iter().any(|t| !t.is_finite()) {
            return Err(DiscretizeError::NonFinite);
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DiscretizeError::InvalidParameter(
                "thresholds must be strictly increasing".into(),
            ));
        }
        Ok(IntervalMap { thresholds })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Number of intervals.
    pub fn k(&self) -> usize {
        self.thresholds.len() + 1
    }

    /// Index of the interval containing `value`.
    pub fn interval(&self, value: f64) -> u32 {
        self.thresholds.partition_point(|&t| t < value) as u32
    }

    pub fn apply(&self, values: &[f64]) -> Vec<u32> {
        values.iter().map(|&v| self.interval(v)).collect()
    }

    /// Interval names such as `(-inf,2.5]`, `(2.5,inf)`.
    pub fn interval_names(&self) -> Vec<String> {
        let t = &self.thresholds;
        (0..self.k())
            .map(|i| {
                let lo = if i == 0 {
                    String::from("(-inf")
                } else {
                    format!("({}", t[i - 1])
                };
                if i == t.len() {
                    format!("{lo},inf)")
                } else {
                    format!("{lo},{}]", t[i])
                }
            })
            .collect()
    }
}

/// Value-to-interval assignment of a fitted column.
pub fn apply_discretizer(map: &IntervalMap, values: &[f64]) -> Vec<u32> {
    map.apply(values)
}

struct Candidate {
    threshold: f64,
    interval: usize,
    split: usize,
}

/// Fits `k - 1` thresholds to `values` against class `labels`, examining `l`
/// quantiles per interval and round.
pub fn fit_discretizer(
    values: &[f64],
    labels: &[u32],
    k: usize,
    l: usize,
) -> Result<IntervalMap, DiscretizeError> {
    if k < 2 || l < 2 {
        return Err(DiscretizeError::InvalidParameter(format!(
            "k and l must be at least 2 (k={k}, l={l})"
        )));
    }
    if values.len() != labels.len() {
        return Err(DiscretizeError::LengthMismatch(values.len(), labels.len()));
    }
    if values.len() < k {
        return Err(DiscretizeError::InsufficientRows {
            rows: values.len(),
            k,
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(DiscretizeError::NonFinite);
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let xs: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let classes = *labels.iter().max().unwrap() as usize + 1;

    // prefix[i * classes + c] = occurrences of class c among xs[..i]
    let n = xs.len();
    let mut prefix = vec![0u64; (n + 1) * classes];
    for (i, &row) in order.iter().enumerate() {
        let (head, tail) = prefix.split_at_mut((i + 1) * classes);
        tail[..classes].copy_from_slice(&head[i * classes..]);
        tail[labels[row] as usize] += 1;
    }
    let mut counts = vec![0u64; classes];
    let mut weighted_entropy = |start: usize, end: usize| -> f64 {
        for c in 0..classes {
            counts[c] = prefix[end * classes + c] - prefix[start * classes + c];
        }
        (end - start) as f64 / n as f64 * entropy_of(&counts)
    };
    let root = weighted_entropy(0, n);

    // Half-open index ranges into xs, ordered by position.
    let mut intervals: Vec<(usize, usize)> = vec![(0, n)];
    for _ in 1..k {
        let mut candidates: Vec<Candidate> = Vec::new();
        for (idx, &(start, end)) in intervals.iter().enumerate() {
            let slice = &xs[start..end];
            if slice[0] == slice[slice.len() - 1] {
                continue;
            }
            let m = slice.len();
            for j in 1..l {
                let pos = (j * m).div_ceil(l) - 1;
                let q = slice[pos];
                let upper = slice.partition_point(|&x| x <= q);
                let (threshold, split) = if upper < m {
                    (q + (slice[upper] - q) / 2.0, upper)
                } else {
                    // q is the interval maximum: split just below it instead.
                    let lower = slice.partition_point(|&x| x < q);
                    let prev = slice[lower - 1];
                    (prev + (q - prev) / 2.0, lower)
                };
                if candidates
                    .iter()
                    .any(|c| c.interval == idx && c.threshold == threshold)
                {
                    continue;
                }
                candidates.push(Candidate {
                    threshold,
                    interval: idx,
                    split: start + split,
                });
            }
        }
        if candidates.is_empty() {
            let thresholds = thresholds_of(&xs, &intervals);
            return Err(DiscretizeError::DegenerateFeature {
                partial: IntervalMap { thresholds },
            });
        }
        candidates.sort_by(|a, b| a.threshold.total_cmp(&b.threshold));

        let parts: Vec<f64> = intervals
            .iter()
            .map(|&(s, e)| weighted_entropy(s, e))
            .collect();
        let rest: f64 = parts.iter().sum();
        let mut best: Option<(f64, &Candidate)> = None;
        for cand in &candidates {
            let (s, e) = intervals[cand.interval];
            let after = rest - parts[cand.interval]
                + weighted_entropy(s, cand.split)
                + weighted_entropy(cand.split, e);
            let gain = root - after;
            match best {
                Some((g, _)) if gain <= g + IG_TIE => {}
                _ => best = Some((gain, cand)),
            }
        }
        let (_, chosen) = best.unwrap();
        let (s, e) = intervals[chosen.interval];
        let split = chosen.split;
        intervals.splice(chosen.interval..=chosen.interval, [(s, split), (split, e)]);
    }
    Ok(IntervalMap {
        thresholds: thresholds_of(&xs, &intervals),
    })
}

fn thresholds_of(xs: &[f64], intervals: &[(usize, usize)]) -> Vec<f64> {
    intervals
        .windows(2)
        .map(|w| {
            let lo = xs[w[0].1 - 1];
            let hi = xs[w[1].0];
            lo + (hi - lo) / 2.0
        })
        .collect()
}

/// Fitted thresholds for every continuous column of a dataset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscretizationMap {
    pub columns: Vec<ColumnMap>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMap {
    pub column: String,
    pub map: IntervalMap,
}

impl DiscretizationMap {
    pub fn get(&self, column: &str) -> Option<&IntervalMap> {
        self.columns
            .iter()
            .find(|c| c.column == column)
            .map(|c| &c.map)
    }
}

/// Fits every continuous column of `ds`. Degenerate columns keep whatever
/// thresholds could be placed; their names are returned alongside the map.
pub fn fit_dataset(
    ds: &Dataset,
    k: usize,
    l: usize,
) -> Result<(DiscretizationMap, Vec<String>), DiscretizeError> {
    let mut map = DiscretizationMap::default();
    let mut degenerate = Vec::new();
    for (i, col) in ds.features().iter().enumerate() {
        let FeatureColumn::Continuous(values) = col else {
            continue;
        };
        let name = ds.schema().feature(i).name.clone();
        let fitted = match fit_discretizer(values, ds.labels(), k, l) {
            Ok(m) => m,
            Err(DiscretizeError::DegenerateFeature { partial }) => {
                degenerate.push(name.clone());
                partial
            }
            Err(e) => return Err(e),
        };
        map.columns.push(ColumnMap {
            column: name,
            map: fitted,
        });
    }
    Ok((map, degenerate))
}

/// Replaces each mapped continuous column by its interval ids. Unmapped
/// columns are kept as they are.
pub fn apply_to_dataset(ds: &Dataset, map: &DiscretizationMap) -> Result<Dataset, DiscretizeError> {
    let mut specs = Vec::with_capacity(ds.p());
    let mut cols = Vec::with_capacity(ds.p());
    for (i, col) in ds.features().iter().enumerate() {
        let spec = ds.schema().feature(i);
        match (col, map.get(&spec.name)) {
            (FeatureColumn::Continuous(values), Some(m)) => {
                specs.push(ColumnSpec::categorical(spec.name.clone(), m.interval_names()));
                cols.push(FeatureColumn::Categorical(m.apply(values)));
            }
            _ => {
                specs.push(spec.clone());
                cols.push(col.clone());
            }
        }
    }
    Ok(ds.with_features(specs, cols)?)
}
