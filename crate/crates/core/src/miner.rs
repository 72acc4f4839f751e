//! Support counting and fixed-capacity frequent itemset selection.
//!
//! Itemsets are class itemsets: a one- or two-item antecedent joined with a
//! class label. Selection keeps the `d_freq` most frequent itemsets either
//! globally or split evenly across classes, ordering by support (descending)
//! and then by enumeration rank (ascending). One-item itemsets are enumerated
//! by `(feature, category, class)`; pair itemsets come after every one-item
//! itemset, ordered by the ranks of their two constituents. An itemset
//! therefore always ranks ahead of its supersets.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::ops::Range;

use hashbrown::HashMap;
use thiserror::Error;

use crate::dataset::{DataError, Dataset};
use crate::rules::{self, Rule, RuleError};
use crate::sampler::SubsampleConfig;

/// Default denominator guard for relative confidence.
pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MiningError {
    #[error("column `{0}` is continuous; discretize it before mining")]
    ContinuousPresent(String),
    #[error("invalid mining configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// `X_i = x_i`: a feature index and a category id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item {
    pub feature: u32,
    pub category: u32,
}

impl Item {
    pub fn new(feature: u32, category: u32) -> Self {
        Item { feature, category }
    }
}

/// A one- or two-item conjunction in canonical form (pairs ordered by
/// strictly increasing feature index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antecedent {
    items: [Item; 2],
    len: u8,
}

impl Antecedent {
    pub fn single(item: Item) -> Self {
        Antecedent {
            items: [item, item],
            len: 1,
        }
    }

    /// Canonical pair, or `None` when both items share a feature.
    pub fn pair(a: Item, b: Item) -> Option<Self> {
        match a.feature.cmp(&b.feature) {
            Ordering::Less => Some(Antecedent {
                items: [a, b],
                len: 2,
            }),
            Ordering::Greater => Some(Antecedent {
                items: [b, a],
                len: 2,
            }),
            Ordering::Equal => None,
        }
    }

    pub fn items(&self) -> &[Item] {
        &self.items[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_pair(&self) -> bool {
        self.len == 2
    }

    /// Whether record `row` satisfies every item.
    pub fn matches(&self, columns: &[&[u32]], row: usize) -> bool {
        self.items()
            .iter()
            .all(|it| columns[it.feature as usize][row] == it.category)
    }
}

/// An antecedent joined with a class, its support count and enumeration rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassItemset {
    pub antecedent: Antecedent,
    pub class: u32,
    pub support: u64,
    pub rank: u64,
}

/// Ordering used by every Top-K selection: a larger key wins.
pub trait Priority {
    type Key: Ord;
    fn key(&self) -> Self::Key;
}

impl Priority for ClassItemset {
    type Key = (u64, Reverse<u64>);
    fn key(&self) -> Self::Key {
        (self.support, Reverse(self.rank))
    }
}

/// `Less` when `a` is selected ahead of `b`.
pub fn priority_order<T: Priority>(a: &T, b: &T) -> Ordering {
    b.key().cmp(&a.key())
}

struct Entry<T: Priority>(T::Key, T);

impl<T: Priority> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl<T: Priority> Eq for Entry<T> {}
impl<T: Priority> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Priority> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// Bounded selector backed by a min-heap of the current winners.
pub struct TopK<T: Priority> {
    capacity: usize,
    heap: BinaryHeap<Reverse<Entry<T>>>,
}

pub type TopKAccumulator = TopK<ClassItemset>;

impl<T: Priority> TopK<T> {
    pub fn new(capacity: usize) -> Self {
        TopK {
            capacity,
            heap: BinaryHeap::with_capacity(capacity.saturating_add(1).min(1 << 16)),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn push(&mut self, value: T) {
        if self.capacity == 0 {
            return;
        }
        let key = value.key();
        if self.heap.len() < self.capacity {
            self.heap.push(Reverse(Entry(key, value)));
        } else if let Some(Reverse(worst)) = self.heap.peek() {
            if key > worst.0 {
                self.heap.pop();
                self.heap.push(Reverse(Entry(key, value)));
            }
        }
    }

    /// Winners, best first.
    pub fn into_sorted_vec(self) -> Vec<T> {
        // Ascending Reverse order is descending key order.
        self.heap
            .into_sorted_vec()
            .into_iter()
            .map(|Reverse(Entry(_, v))| v)
            .collect()
    }
}

impl<T: Priority> Extend<T> for TopK<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.push(v);
        }
    }
}

/// The `capacity` best itemsets, sorted best first.
pub fn select_topk<I>(itemsets: I, capacity: usize) -> Vec<ClassItemset>
where
    I: IntoIterator<Item = ClassItemset>,
{
    let mut acc = TopKAccumulator::new(capacity);
    acc.extend(itemsets);
    acc.into_sorted_vec()
}

/// Dense per-(item, class) counts from one pass over the records.
#[derive(Debug, Clone, PartialEq)]
pub struct SingletonCounts {
    offsets: Vec<usize>,
    categories: Vec<usize>,
    classes: usize,
    counts: Vec<u64>,
}

impl SingletonCounts {
    /// Zeroed table shaped for `ds`.
    pub fn empty(ds: &Dataset) -> Self {
        let categories: Vec<usize> = ds
            .schema()
            .features()
            .map(|c| c.categories.len())
            .collect();
        let mut offsets = Vec::with_capacity(categories.len());
        let mut total = 0;
        for &m in &categories {
            offsets.push(total);
            total += m;
        }
        let classes = ds.num_classes();
        SingletonCounts {
            offsets,
            categories,
            classes,
            counts: vec![0; total * classes],
        }
    }

    /// Counts records in `rows`.
    pub fn count_rows(ds: &Dataset, rows: Range<usize>) -> Result<Self, MiningError> {
        let columns = categorical(ds)?;
        let mut table = Self::empty(ds);
        let labels = ds.labels();
        let c = table.classes;
        for (f, col) in columns.iter().enumerate() {
            let base = table.offsets[f];
            for r in rows.clone() {
                table.counts[(base + col[r] as usize) * c + labels[r] as usize] += 1;
            }
        }
        Ok(table)
    }

    pub fn merge(&mut self, other: &SingletonCounts) {
        assert_eq!(self.counts.len(), other.counts.len(), "table shapes differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    fn item_index(&self, item: Item) -> Option<usize> {
        let f = item.feature as usize;
        if f >= self.offsets.len() || item.category as usize >= self.categories[f] {
            return None;
        }
        Some(self.offsets[f] + item.category as usize)
    }

    pub fn count(&self, item: Item, class: u32) -> u64 {
        self.antecedent_counts(item)
            .map_or(0, |row| row[class as usize])
    }

    /// Counts of `item` with every class.
    pub fn antecedent_counts(&self, item: Item) -> Option<&[u64]> {
        let i = self.item_index(item)?;
        Some(&self.counts[i * self.classes..(i + 1) * self.classes])
    }

    /// Enumeration rank of the one-item itemset `(item, class)`.
    pub fn rank(&self, item: Item, class: u32) -> u64 {
        let i = self.item_index(item).expect("item outside schema");
        (i * self.classes + class as usize) as u64
    }

    /// Number of distinct one-item class itemsets; pair ranks start here.
    pub fn universe(&self) -> u64 {
        self.counts.len() as u64
    }

    /// Number of count cells held.
    pub fn entries(&self) -> usize {
        self.counts.len()
    }

    /// Every one-item class itemset in rank order, zero supports included.
    pub fn itemsets(&self) -> impl Iterator<Item = ClassItemset> + '_ {
        let classes = self.classes;
        self.offsets
            .iter()
            .zip(&self.categories)
            .enumerate()
            .flat_map(move |(f, (&off, &m))| {
                (0..m).flat_map(move |cat| {
                    (0..classes).map(move |c| {
                        let idx = (off + cat) * classes + c;
                        ClassItemset {
                            antecedent: Antecedent::single(Item::new(f as u32, cat as u32)),
                            class: c as u32,
                            support: self.counts[idx],
                            rank: idx as u64,
                        }
                    })
                })
            })
    }
}

fn categorical(ds: &Dataset) -> Result<Vec<&[u32]>, MiningError> {
    ds.categorical_columns().map_err(|e| match e {
        DataError::ContinuousPresent(name) => MiningError::ContinuousPresent(name),
        other => MiningError::Data(other),
    })
}

/// Exact per-(item, class) counts over the whole dataset.
pub fn count_singletons(ds: &Dataset) -> Result<SingletonCounts, MiningError> {
    SingletonCounts::count_rows(ds, 0..ds.n())
}

/// Pair class itemsets whose two constituents (same class) are both in `fs1`,
/// with zero support and ranks placed after the `universe` one-item ranks.
/// Pair itemsets in `fs1` are ignored.
pub fn generate_pair_candidates(fs1: &[ClassItemset], universe: u64) -> Vec<ClassItemset> {
    let mut singles: Vec<&ClassItemset> = fs1.iter().filter(|s| !s.antecedent.is_pair()).collect();
    singles.sort_by_key(|s| (s.class, s.rank));
    let mut out = Vec::new();
    let mut start = 0;
    while start < singles.len() {
        let class = singles[start].class;
        let end = start
            + singles[start..]
                .iter()
                .take_while(|s| s.class == class)
                .count();
        let group = &singles[start..end];
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                if a.rank == b.rank {
                    continue;
                }
                let (ia, ib) = (a.antecedent.items()[0], b.antecedent.items()[0]);
                if let Some(antecedent) = Antecedent::pair(ia, ib) {
                    out.push(ClassItemset {
                        antecedent,
                        class,
                        support: 0,
                        rank: pair_rank(universe, a.rank, b.rank),
                    });
                }
            }
        }
        start = end;
    }
    out.sort_by_key(|s| s.rank);
    out.dedup_by_key(|s| s.rank);
    out
}

/// Rank of the pair built from one-item itemsets of ranks `a` and `b`.
pub fn pair_rank(universe: u64, a: u64, b: u64) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    universe + lo * universe + hi
}

/// Per-class counts for a set of pair antecedents.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCounts {
    classes: usize,
    antecedents: Vec<Antecedent>,
    index: HashMap<Antecedent, usize>,
    counts: Vec<u64>,
}

impl PairCounts {
    /// Counts of `antecedent` with every class, if it was counted.
    pub fn counts(&self, antecedent: &Antecedent) -> Option<&[u64]> {
        let &i = self.index.get(antecedent)?;
        Some(&self.counts[i * self.classes..(i + 1) * self.classes])
    }

    /// Number of distinct antecedents (table keys).
    pub fn len(&self) -> usize {
        self.antecedents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antecedents.is_empty()
    }

    pub fn antecedents(&self) -> &[Antecedent] {
        &self.antecedents
    }

    pub fn merge(&mut self, other: &PairCounts) {
        assert_eq!(self.antecedents, other.antecedents, "pair tables differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Counting plan for a fixed set of pair antecedents: the first item of each
/// antecedent points at its partners so a record is scanned without hashing.
#[derive(Debug, Clone)]
pub struct PairPlan {
    classes: usize,
    antecedents: Vec<Antecedent>,
    index: HashMap<Antecedent, usize>,
    firsts: Vec<(Item, Vec<(Item, usize)>)>,
}

impl PairPlan {
    pub fn new<'a, I>(antecedents: I, classes: usize) -> Self
    where
        I: IntoIterator<Item = &'a Antecedent>,
    {
        let mut index = HashMap::new();
        let mut list = Vec::new();
        for a in antecedents {
            debug_assert!(a.is_pair());
            if !index.contains_key(a) {
                index.insert(*a, list.len());
                list.push(*a);
            }
        }
        let mut firsts: Vec<(Item, Vec<(Item, usize)>)> = Vec::new();
        let mut first_index: HashMap<Item, usize> = HashMap::new();
        for (i, a) in list.iter().enumerate() {
            let [x, y] = [a.items()[0], a.items()[1]];
            let slot = *first_index.entry(x).or_insert_with(|| {
                firsts.push((x, Vec::new()));
                firsts.len() - 1
            });
            firsts[slot].1.push((y, i));
        }
        PairPlan {
            classes,
            antecedents: list,
            index,
            firsts,
        }
    }

    pub fn len(&self) -> usize {
        self.antecedents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.antecedents.is_empty()
    }

    fn zeroed(&self) -> PairCounts {
        PairCounts {
            classes: self.classes,
            antecedents: self.antecedents.clone(),
            index: self.index.clone(),
            counts: vec![0; self.antecedents.len() * self.classes],
        }
    }

    /// Counts records in `rows`.
    pub fn count_rows(&self, ds: &Dataset, rows: Range<usize>) -> Result<PairCounts, MiningError> {
        let columns = categorical(ds)?;
        let labels = ds.labels();
        let mut out = self.zeroed();
        let c = self.classes;
        for r in rows {
            let y = labels[r] as usize;
            for (first, partners) in &self.firsts {
                if columns[first.feature as usize][r] != first.category {
                    continue;
                }
                for &(second, idx) in partners {
                    if columns[second.feature as usize][r] == second.category {
                        out.counts[idx * c + y] += 1;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Joint per-class counts for the antecedents of `candidates`, one pass.
pub fn count_pairs(ds: &Dataset, candidates: &[ClassItemset]) -> Result<PairCounts, MiningError> {
    let plan = PairPlan::new(
        candidates
            .iter()
            .filter(|c| c.antecedent.is_pair())
            .map(|c| &c.antecedent),
        ds.num_classes(),
    );
    plan.count_rows(ds, 0..ds.n())
}

/// How counting passes are executed. [`Sequential`] runs on the calling
/// thread; other strategies may split rows and merge tables by summation.
pub trait CountPass {
    fn singletons(&self, ds: &Dataset) -> Result<SingletonCounts, MiningError>;
    fn pairs(&self, ds: &Dataset, plan: &PairPlan) -> Result<PairCounts, MiningError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl CountPass for Sequential {
    fn singletons(&self, ds: &Dataset) -> Result<SingletonCounts, MiningError> {
        count_singletons(ds)
    }

    fn pairs(&self, ds: &Dataset, plan: &PairPlan) -> Result<PairCounts, MiningError> {
        plan.count_rows(ds, 0..ds.n())
    }
}

/// Every count a rule score needs.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportTables {
    pub singles: SingletonCounts,
    pub pairs: PairCounts,
    pub class_totals: Vec<u64>,
    pub n: u64,
}

impl SupportTables {
    /// Exact tables over `ds` for all one-item antecedents and the given pairs.
    pub fn count<'a, P, I>(ds: &Dataset, pairs: I, pass: &P) -> Result<Self, MiningError>
    where
        P: CountPass + ?Sized,
        I: IntoIterator<Item = &'a Antecedent>,
    {
        let singles = pass.singletons(ds)?;
        let plan = PairPlan::new(pairs, ds.num_classes());
        let pairs = pass.pairs(ds, &plan)?;
        Ok(SupportTables {
            singles,
            pairs,
            class_totals: ds.class_totals(),
            n: ds.n() as u64,
        })
    }

    pub fn antecedent_counts(&self, antecedent: &Antecedent) -> Option<&[u64]> {
        if antecedent.is_pair() {
            self.pairs.counts(antecedent)
        } else {
            self.singles.antecedent_counts(antecedent.items()[0])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scoring {
    Confidence,
    RelativeConfidence,
    Lift,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    /// Frequent itemsets kept (split across classes when `per_class`).
    pub d_freq: usize,
    /// Rules selected.
    pub d_conf: usize,
    pub per_class: bool,
    pub scoring: Scoring,
    pub reluctant: bool,
    /// Added to relative-confidence denominators.
    pub epsilon: f64,
    /// Mine frequent itemsets on a uniform subsample.
    pub subsample: Option<SubsampleConfig>,
    /// With `subsample`, recount rule supports over the full dataset.
    pub exact_confidence: bool,
}

impl MiningConfig {
    /// Global mining scored by confidence.
    pub fn fixed_size(d_freq: usize, d_conf: usize) -> Self {
        MiningConfig {
            d_freq,
            d_conf,
            per_class: false,
            scoring: Scoring::Confidence,
            reluctant: false,
            epsilon: DEFAULT_EPSILON,
            subsample: None,
            exact_confidence: true,
        }
    }

    /// Per-class mining scored by relative confidence.
    pub fn unbalanced(d_freq: usize, d_conf: usize) -> Self {
        MiningConfig {
            per_class: true,
            scoring: Scoring::RelativeConfidence,
            ..Self::fixed_size(d_freq, d_conf)
        }
    }

    /// Per-class, relative confidence, with the reluctant interaction gate.
    pub fn reluctant(d_freq: usize, d_conf: usize) -> Self {
        MiningConfig {
            reluctant: true,
            ..Self::unbalanced(d_freq, d_conf)
        }
    }

    pub fn validate(&self) -> Result<(), MiningError> {
        if self.d_conf < 1 || self.d_conf > self.d_freq {
            return Err(MiningError::InvalidConfig(format!(
                "need 1 <= d_conf <= d_freq (d_freq={}, d_conf={})",
                self.d_freq, self.d_conf
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(MiningError::InvalidConfig("epsilon must be finite and >= 0".into()));
        }
        if let Some(s) = &self.subsample {
            if s.n_prime == 0 {
                return Err(MiningError::InvalidConfig("subsample size must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// Per-class capacity `max(1, floor(d_freq / classes))`.
    pub fn class_capacity(&self, classes: usize) -> usize {
        (self.d_freq / classes.max(1)).max(1)
    }
}

/// Sizes of the count tables built while mining.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MiningStats {
    /// Cells of the one-item table (items times classes).
    pub singleton_cells: usize,
    /// Number of features, i.e. one-item table blocks.
    pub singleton_blocks: usize,
    /// Distinct pair antecedents counted.
    pub pair_entries: usize,
    /// Pair class itemsets generated from the frequent one-item sets.
    pub pair_candidates: usize,
    /// Records the frequent sets were mined from.
    pub rows_mined: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningOutput {
    pub per_class: bool,
    /// One list per class when `per_class`, else a single global list; each
    /// sorted by (support desc, rank asc).
    pub frequent: Vec<Vec<ClassItemset>>,
    pub tables: SupportTables,
    pub stats: MiningStats,
}

impl MiningOutput {
    pub fn itemsets(&self) -> impl Iterator<Item = &ClassItemset> {
        self.frequent.iter().flatten()
    }

    /// Pair antecedents among the frequent itemsets, first occurrence order.
    pub fn pair_antecedents(&self) -> Vec<Antecedent> {
        let mut seen = hashbrown::HashSet::new();
        self.itemsets()
            .filter(|s| s.antecedent.is_pair() && seen.insert(s.antecedent))
            .map(|s| s.antecedent)
            .collect()
    }
}

/// Frequent itemsets of `ds` under `config` (subsampling is not applied here).
pub fn mine_frequent(ds: &Dataset, config: &MiningConfig) -> Result<MiningOutput, MiningError> {
    mine_frequent_with(ds, config, &Sequential)
}

pub fn mine_frequent_with<P: CountPass + ?Sized>(
    ds: &Dataset,
    config: &MiningConfig,
    pass: &P,
) -> Result<MiningOutput, MiningError> {
    config.validate()?;
    let classes = ds.num_classes();
    let singles = pass.singletons(ds)?;

    let (groups, capacity) = if config.per_class {
        (classes, config.class_capacity(classes))
    } else {
        (1, config.d_freq)
    };
    let group_of = |class: u32| if config.per_class { class as usize } else { 0 };

    let mut heaps: Vec<TopKAccumulator> = (0..groups).map(|_| TopK::new(capacity)).collect();
    for s in singles.itemsets().filter(|s| s.support > 0) {
        heaps[group_of(s.class)].push(s);
    }
    let fs1: Vec<ClassItemset> = heaps.iter().flat_map(|h| h.heap.iter().map(|e| e.0 .1)).collect();
    let mut candidates = generate_pair_candidates(&fs1, singles.universe());

    let plan = PairPlan::new(candidates.iter().map(|c| &c.antecedent), classes);
    let pairs = pass.pairs(ds, &plan)?;
    for cand in &mut candidates {
        cand.support = pairs.counts(&cand.antecedent).map_or(0, |c| c[cand.class as usize]);
    }
    for cand in candidates.iter().filter(|c| c.support > 0) {
        heaps[group_of(cand.class)].push(*cand);
    }

    let stats = MiningStats {
        singleton_cells: singles.entries(),
        singleton_blocks: ds.p(),
        pair_entries: pairs.len(),
        pair_candidates: candidates.len(),
        rows_mined: ds.n(),
    };
    Ok(MiningOutput {
        per_class: config.per_class,
        frequent: heaps.into_iter().map(TopK::into_sorted_vec).collect(),
        tables: SupportTables {
            singles,
            pairs,
            class_totals: ds.class_totals(),
            n: ds.n() as u64,
        },
        stats,
    })
}

/// Output of threshold-based mining.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdOutput {
    /// Frequent itemsets in rank order.
    pub frequent: Vec<ClassItemset>,
    pub tables: SupportTables,
    /// Rules meeting `minconf`, in rank order.
    pub rules: Vec<Rule>,
}

fn meets(count: u64, fraction: f64, total: u64) -> bool {
    count as f64 + 1e-9 >= fraction * total as f64
}

/// Frequent one-item itemsets by `minsupp`, pair candidates from their
/// same-class combinations, then rules with confidence at least `minconf`.
pub fn mine_with_thresholds(
    ds: &Dataset,
    minsupp: f64,
    minconf: f64,
    epsilon: f64,
) -> Result<ThresholdOutput, MiningError> {
    if !(minsupp > 0.0 && minsupp <= 1.0) || !(minconf > 0.0 && minconf <= 1.0) {
        return Err(MiningError::InvalidConfig(format!(
            "thresholds must lie in (0, 1] (minsupp={minsupp}, minconf={minconf})"
        )));
    }
    let n = ds.n() as u64;
    let singles = count_singletons(ds)?;
    let fs1: Vec<ClassItemset> = singles
        .itemsets()
        .filter(|s| s.support > 0 && meets(s.support, minsupp, n))
        .collect();
    let mut candidates = generate_pair_candidates(&fs1, singles.universe());
    let pairs = count_pairs(ds, &candidates)?;
    for cand in &mut candidates {
        cand.support = pairs.counts(&cand.antecedent).map_or(0, |c| c[cand.class as usize]);
    }
    let mut frequent = fs1;
    frequent.extend(
        candidates
            .into_iter()
            .filter(|c| c.support > 0 && meets(c.support, minsupp, n)),
    );
    let tables = SupportTables {
        singles,
        pairs,
        class_totals: ds.class_totals(),
        n,
    };
    let rules = rules::generate_rules_threshold(&frequent, &tables, minconf, epsilon)?;
    Ok(ThresholdOutput {
        frequent,
        tables,
        rules,
    })
}

/// Fraction of records matching `antecedent` (and `class`, when given).
pub fn itemset_frequency(
    ds: &Dataset,
    antecedent: &Antecedent,
    class: Option<u32>,
) -> Result<f64, MiningError> {
    let columns = categorical(ds)?;
    let labels = ds.labels();
    let hits = (0..ds.n())
        .filter(|&r| antecedent.matches(&columns, r) && class.is_none_or(|c| labels[r] == c))
        .count();
    Ok(hits as f64 / ds.n() as f64)
}
