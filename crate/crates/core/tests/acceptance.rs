//! Acceptance checks for the whole pipeline, one line per criterion.
//!
//! Run with `cargo test -p araf-core --test acceptance`. The process exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use araf_core::bench::{
    freq_trial, run_trial, s1_ground_truth, BenchConfig, Method, RecoveryCounts, Trial,
};
use araf_core::dataset::{ColumnSpec, Dataset, FeatureColumn, Schema};
use araf_core::features::suggest_params;
use araf_core::miner::{mine_frequent, Antecedent, Item, MiningConfig};
use araf_core::oracle::enumerate;
use araf_core::pipeline::mine_rules;
use araf_core::sampler::{estimate_frequencies, required_sample_size, SubsampleConfig};
use araf_core::synth::{SynthConfig, Variant};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIALS: u64 = 100;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    println!(
        "{} {id} [{:.1}s] {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    Outcome { id, pass, detail, elapsed }
}

fn oracle_equivalence() -> (bool, String) {
    let mut mismatches = 0;
    let mut cases = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
        let n = rng.random_range(1..=500);
        let p = rng.random_range(1..=12);
        let cats = rng.random_range(1..=4);
        let classes = rng.random_range(1..=3);
        let ds = common::random_dataset(seed, n, p, cats, classes);
        let reference = enumerate(&ds).unwrap();
        for _ in 0..20 {
            let cfg = common::random_config(&mut rng);
            let mined = mine_rules(&ds, &cfg).unwrap();
            cases += 1;
            if mined.output.frequent != reference.topk(&cfg)
                || mined.rules != reference.reference_rules(&cfg).unwrap()
            {
                mismatches += 1;
            }
        }
    }
    (mismatches == 0, format!("{mismatches} mismatches in {cases} dataset/config pairs"))
}

fn s1_trials() -> Vec<Trial> {
    let cfg = BenchConfig::default();
    (0..TRIALS).map(|seed| run_trial(Variant::S1, seed, &cfg).unwrap()).collect()
}

fn recovery(trials: &[Trial], method: Method) -> RecoveryCounts {
    let mut counts = RecoveryCounts::default();
    for t in trials {
        counts.add(t.rules_of(method));
    }
    counts
}

fn rule_recovery(trials: &[Trial]) -> (bool, String) {
    let counts = recovery(trials, Method::Alg6);
    let found: Vec<usize> = s1_ground_truth()
        .iter()
        .map(|(a, c)| counts.count(a, *c))
        .collect();
    let classes: Vec<usize> = (0..3u32)
        .map(|c| trials.iter().filter(|t| t.rules_of(Method::Alg6).iter().any(|r| r.class == c)).count())
        .collect();
    (
        found.iter().all(|&k| k >= 70),
        format!(
            "ground-truth recovery per {TRIALS} trials {found:?} (need >= 70 each); trials with a class 0/1/2 rule {classes:?}"
        ),
    )
}

fn redundancy_exclusion() -> (bool, String) {
    let cfg = BenchConfig { evaluate: false, ..Default::default() };
    let constant = [Item::new(97, 1), Item::new(98, 1)];
    let (mut redundant, mut any) = (0, 0);
    for seed in 0..TRIALS {
        let trial = run_trial(Variant::S2, seed, &cfg).unwrap();
        let rules = trial.rules_of(Method::Alg6);
        for r in rules.iter().filter(|r| r.antecedent.is_pair()) {
            let items = r.antecedent.items();
            let Some(pos) = items.iter().position(|i| constant.contains(i)) else {
                continue;
            };
            any += 1;
            let parent = Antecedent::single(items[1 - pos]);
            let equal_parent = rules.iter().any(|q| {
                q.antecedent == parent && q.class == r.class && q.rconf == r.rconf
            });
            if equal_parent {
                redundant += 1;
            }
        }
    }
    (
        redundant == 0,
        format!(
            "{redundant} selected pairs with a constant item and an equal-score parent; {any} selected pairs with a constant item at all"
        ),
    )
}

fn scoring_contrast(trials: &[Trial]) -> (bool, String) {
    let all_zero = trials
        .iter()
        .filter(|t| t.rules_of(Method::Alg4).iter().all(|r| r.class == 0))
        .count();
    let with_two = trials
        .iter()
        .filter(|t| t.rules_of(Method::Alg5).iter().any(|r| r.class == 2))
        .count();
    (
        all_zero >= 90 && with_two >= 90,
        format!(
            "global confidence top-5 all class 0 in {all_zero}/{TRIALS} (need >= 90); per-class rconf with a class-2 rule in {with_two}/{TRIALS} (need >= 90)"
        ),
    )
}

fn downstream(trials: &[Trial]) -> (bool, String) {
    let wins = trials
        .iter()
        .filter(|t| {
            t.result_of(Method::Alg6).unwrap().logloss < t.result_of(Method::Origin).unwrap().logloss
        })
        .count();
    let mean = |m: Method| {
        trials.iter().map(|t| t.result_of(m).unwrap().logloss).sum::<f64>() / trials.len() as f64
    };
    (
        wins >= 90,
        format!(
            "reluctant features beat original columns in {wins}/{TRIALS} trials (need >= 90); mean logloss origin {:.3} alg4 {:.3} alg5 {:.3} alg6 {:.3}",
            mean(Method::Origin),
            mean(Method::Alg4),
            mean(Method::Alg5),
            mean(Method::Alg6)
        ),
    )
}

fn two_binary_columns(n: usize, ones: [usize; 2], seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = ones
        .iter()
        .map(|&k| {
            let mut v: Vec<u32> = (0..n).map(|i| (i < k) as u32).collect();
            v.shuffle(&mut rng);
            FeatureColumn::Categorical(v)
        })
        .collect();
    let bits = || vec!["0".to_string(), "1".to_string()];
    let schema = Schema::new(vec![
        ColumnSpec::categorical("A", bits()),
        ColumnSpec::categorical("B", bits()),
        ColumnSpec::label("Y", vec!["1".into()]),
    ])
    .unwrap();
    Dataset::new(schema, cols, vec![0; n]).unwrap()
}

fn hoeffding() -> (bool, String) {
    let size = required_sample_size(0.05, 0.008).unwrap();
    let population = two_binary_columns(100_000, [75_000, 70_000], 1);
    let itemsets = [
        (Antecedent::single(Item::new(0, 1)), None),
        (Antecedent::single(Item::new(1, 1)), None),
    ];
    let mut misordered = 0;
    for seed in 0..1000 {
        let f = estimate_frequencies(&population, &itemsets, &SubsampleConfig::new(5000, seed)).unwrap();
        if f[0] <= f[1] {
            misordered += 1;
        }
    }
    let rate = misordered as f64 / 1000.0;
    (
        size == 4972 && size <= 5000 && rate <= 0.008,
        format!("required_sample_size(0.05, 0.008) = {size}; misordered {misordered}/1000 runs at n'=5000 (need <= 0.8%)"),
    )
}

fn frequency_recovery() -> (bool, String) {
    let sizes = [100, 500, 1000, 5000];
    let mut recovered = Vec::new();
    let mut errors = Vec::new();
    for &n_prime in &sizes {
        let (mut hit, mut err) = (0, 0.0);
        for seed in 0..TRIALS {
            let t = freq_trial(&SynthConfig::freq_bench(seed), n_prime, 5).unwrap();
            hit += t.recovered as usize;
            err += t.mean_abs_error;
        }
        recovered.push(hit);
        errors.push(err / TRIALS as f64);
    }
    let monotone = errors.windows(2).all(|w| w[1] <= w[0]);
    let errs: Vec<String> = errors.iter().map(|e| format!("{e:.4}")).collect();
    (
        recovered.iter().all(|&h| h == TRIALS as usize) && monotone,
        format!("n' {sizes:?}: recovered {recovered:?}/{TRIALS}, mean abs error [{}]", errs.join(", ")),
    )
}

fn random_binary(n: usize, p: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = || vec!["0".to_string(), "1".to_string()];
    let mut specs: Vec<ColumnSpec> = (0..p).map(|f| ColumnSpec::categorical(format!("X{f}"), bits())).collect();
    specs.push(ColumnSpec::label("Y", vec!["0".into(), "1".into(), "2".into()]));
    let cols = (0..p)
        .map(|_| FeatureColumn::Categorical((0..n).map(|_| rng.random_bool(0.5) as u32).collect()))
        .collect();
    let labels = (0..n).map(|_| rng.random_range(0..3)).collect();
    Dataset::new(Schema::new(specs).unwrap(), cols, labels).unwrap()
}

fn mining_config(p: usize) -> MiningConfig {
    let (d_freq, d_conf) = suggest_params(p, 3);
    MiningConfig::reluctant(d_freq, d_conf)
}

fn time_mining(ds: &Dataset, cfg: &MiningConfig) -> f64 {
    let start = Instant::now();
    std::hint::black_box(mine_rules(ds, cfg).unwrap());
    start.elapsed().as_secs_f64()
}

fn scaling() -> (bool, String) {
    let ns = [10_000, 20_000, 40_000];
    let ps = [25, 50, 100];
    let cells: Vec<(Dataset, MiningConfig)> = ns
        .iter()
        .flat_map(|&n| ps.iter().map(move |&p| (n, p)))
        .map(|(n, p)| (random_binary(n, p, (n * 1000 + p) as u64), mining_config(p)))
        .collect();
    // Round-robin repetitions, so a slow stretch hits every cell alike.
    let mut best = [f64::INFINITY; 9];
    for _ in 0..7 {
        for (b, (ds, cfg)) in best.iter_mut().zip(&cells) {
            *b = b.min(time_mining(ds, cfg));
        }
    }
    let t: Vec<&[f64]> = best.chunks(3).collect();
    let mut ratios = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i + 1 < 3 {
                ratios.push(t[i + 1][j] / t[i][j]);
            }
            if j + 1 < 3 {
                ratios.push(t[i][j + 1] / t[i][j]);
            }
        }
    }
    let ok = ratios.iter().all(|r| (1.5..=3.0).contains(r));
    let fmt: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    (
        ok,
        format!(
            "doubling ratios [{}] (need each in [1.5, 3.0]); fastest {:.1} ms, slowest {:.1} ms",
            fmt.join(", "),
            t[0][0] * 1e3,
            t[2][2] * 1e3
        ),
    )
}

fn complexity() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut fractions = Vec::new();
    for &p in &[25usize, 50, 100, 200, 400] {
        let cfg = mining_config(p);
        let ds = random_binary(5000, p, p as u64);
        let stats = mine_frequent(&ds, &cfg).unwrap().stats;
        let bound = cfg.d_freq * cfg.d_freq + p;
        let entries = stats.pair_entries + stats.singleton_blocks;
        let cells = stats.pair_entries * 3 + stats.singleton_cells;
        ok &= entries <= bound && cells <= bound;
        fractions.push(cells as f64 / bound as f64);
        parts.push(format!("p={p} d_freq={} entries={entries} cells={cells} bound={bound}", cfg.d_freq));
    }
    let fractions: Vec<String> = fractions.iter().map(|f| format!("{f:.3}")).collect();
    (
        ok,
        format!("{}; cells/bound [{}]", parts.join("; "), fractions.join(", ")),
    )
}

fn main() {
    let mut outcomes = Vec::new();
    outcomes.push(run("1 oracle-equivalence", oracle_equivalence));
    let trials = s1_trials();
    outcomes.push(run("2 s1-rule-recovery", || rule_recovery(&trials)));
    outcomes.push(run("3 s2-redundancy-exclusion", redundancy_exclusion));
    outcomes.push(run("4 scoring-contrast", || scoring_contrast(&trials)));
    outcomes.push(run("5 downstream-logloss", || downstream(&trials)));
    outcomes.push(run("6 hoeffding-subsampling", hoeffding));
    outcomes.push(run("7 frequency-benchmark", frequency_recovery));
    outcomes.push(run("8 scaling", scaling));
    outcomes.push(run("9 complexity-guard", complexity));

    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.pass).collect();
    println!(
        "acceptance: {}/{} passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    if !failed.is_empty() {
        for o in &failed {
            eprintln!("failed: {} ({}, {:.1}s)", o.id, o.detail, o.elapsed.as_secs_f64());
        }
        std::process::exit(1);
    }
}
