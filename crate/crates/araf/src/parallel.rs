//! Row-partitioned counting on scoped threads.

use std::num::NonZeroUsize;
use std::ops::Range;
use std::thread;

use araf_core::dataset::Dataset;
use araf_core::miner::{CountPass, MiningError, PairCounts, PairPlan, SingletonCounts};

/// Splits rows into one contiguous block per worker and sums the partial
/// tables. Results do not depend on the worker count.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    workers: NonZeroUsize,
}

impl Threaded {
    pub fn new(workers: usize) -> Self {
        Threaded {
            workers: NonZeroUsize::new(workers).unwrap_or(NonZeroUsize::MIN),
        }
    }

    pub fn workers(&self) -> usize {
        self.workers.get()
    }

    fn blocks(&self, n: usize) -> Vec<Range<usize>> {
        let k = self.workers.get().min(n.max(1));
        (0..k).map(|i| i * n / k..(i + 1) * n / k).collect()
    }

    fn run<T, F, M>(&self, n: usize, count: F, mut merge: M) -> Result<T, MiningError>
    where
        T: Send,
        F: Fn(Range<usize>) -> Result<T, MiningError> + Sync,
        M: FnMut(&mut T, &T),
    {
        let blocks = self.blocks(n);
        if blocks.len() == 1 {
            return count(0..n);
        }
        let parts: Vec<Result<T, MiningError>> = thread::scope(|s| {
            let handles: Vec<_> = blocks
                .into_iter()
                .map(|range| {
                    let count = &count;
                    s.spawn(move || count(range))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("counting worker panicked"))
                .collect()
        });
        let mut parts = parts.into_iter();
        let mut total = parts.next().expect("at least one block")?;
        for part in parts {
            merge(&mut total, &part?);
        }
        Ok(total)
    }
}

impl CountPass for Threaded {
    fn singletons(&self, ds: &Dataset) -> Result<SingletonCounts, MiningError> {
        self.run(ds.n(), |r| SingletonCounts::count_rows(ds, r), |a, b| a.merge(b))
    }

    fn pairs(&self, ds: &Dataset, plan: &PairPlan) -> Result<PairCounts, MiningError> {
        self.run(ds.n(), |r| plan.count_rows(ds, r), |a, b| a.merge(b))
    }
}

/// Worker count: the flag (which also reads `ARAF_THREADS`), else the
/// available parallelism.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.filter(|&t| t > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
}
