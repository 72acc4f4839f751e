use araf_core::bench::{freq_ground_truth, s1_ground_truth};
use araf_core::dataset::{ColumnSpec, Dataset, FeatureColumn, Schema};
use araf_core::features::{feature_name, generate_features, transform, FeatureError, FeatureMode, FeatureSpec};
use araf_core::miner::{
    count_singletons, generate_pair_candidates, itemset_frequency, mine_frequent, mine_with_thresholds,
    Antecedent, Item, MiningConfig,
};
use araf_core::oracle::{enumerate, OracleError};
use araf_core::pipeline::mine_rules;
use araf_core::rules::Rule;
use araf_core::sampler::{estimate_frequencies, SubsampleConfig};
use araf_core::synth::{gen_freq_bench, gen_s1, gen_s2, SynthConfig};

fn binary(rows: &[(&[u32], u32)], classes: u32) -> Dataset {
    let p = rows[0].0.len();
    let bits = || vec!["0".to_string(), "1".to_string()];
    let mut specs: Vec<ColumnSpec> = (1..=p).map(|f| ColumnSpec::categorical(format!("X{f}"), bits())).collect();
    specs.push(ColumnSpec::label("Y", (0..classes).map(|c| c.to_string()).collect()));
    let cols = (0..p)
        .map(|f| FeatureColumn::Categorical(rows.iter().map(|r| r.0[f]).collect()))
        .collect();
    Dataset::new(Schema::new(specs).unwrap(), cols, rows.iter().map(|r| r.1).collect()).unwrap()
}

fn item(f: u32, v: u32) -> Item {
    Item::new(f, v)
}

#[test]
fn s1_labels_follow_noised_proportions() {
    // Chi-square with 2 degrees of freedom at alpha = 0.001.
    const CRITICAL: f64 = 13.815510557964274;
    let noise: f64 = 0.05;
    let expected = [0.70, 0.225, 0.075].map(|p| (1.0 - noise) * p + noise / 3.0);
    assert!((expected[0] - (0.95 * 0.70 + 0.05 / 3.0f64)).abs() < 1e-15);
    for seed in 0..100 {
        let ds = gen_s1(&SynthConfig::s1(seed)).unwrap();
        let counts = ds.class_totals();
        let n = ds.n() as f64;
        let chi2: f64 = counts
            .iter()
            .zip(expected)
            .map(|(&o, p)| (o as f64 - n * p).powi(2) / (n * p))
            .sum();
        assert!(chi2 < CRITICAL, "seed {seed}: chi2 {chi2:.2}, counts {counts:?}");
    }
}

#[test]
fn s1_pre_noise_proportions() {
    let ds = gen_s1(&SynthConfig { n: 200_000, noise_rate: 0.0, ..SynthConfig::s1(3) }).unwrap();
    let n = ds.n() as f64;
    for (count, p) in ds.class_totals().iter().zip([0.70, 0.225, 0.075]) {
        let sd = (p * (1.0 - p) / n).sqrt();
        assert!((*count as f64 / n - p).abs() < 4.0 * sd);
    }
}

#[test]
fn s2_constant_columns() {
    let ds = gen_s2(&SynthConfig::s2(11)).unwrap();
    let cols = ds.categorical_columns().unwrap();
    assert!(cols[97].iter().all(|&v| v == 1) && cols[98].iter().all(|&v| v == 1));
    let with_x98 = itemset_frequency(&ds, &Antecedent::single(item(97, 1)), Some(0)).unwrap();
    let class0 = ds.class_totals()[0] as f64 / ds.n() as f64;
    assert_eq!(with_x98, class0);
}

#[test]
fn freq_bench_marginals() {
    let ds = gen_freq_bench(&SynthConfig { n: 200_000, ..SynthConfig::freq_bench(4) }).unwrap();
    assert!(ds.labels().iter().all(|&y| y == 0));
    assert_eq!(ds.schema().label().categories, vec!["1".to_string()]);
    let n = ds.n() as f64;
    for (a, p) in freq_ground_truth() {
        let f = itemset_frequency(&ds, &a, None).unwrap();
        assert!((f - p).abs() < 4.0 * (p * (1.0 - p) / n).sqrt(), "{a:?}: {f} vs {p}");
    }
    assert!((0.9 * (75.0 / 90.0) + 0.1 * 0.5 - 0.8f64).abs() < 1e-12);
}

#[test]
fn freq_bench_top_four() {
    let ds = gen_freq_bench(&SynthConfig::freq_bench(0)).unwrap();
    let out = mine_frequent(&ds, &MiningConfig::fixed_size(4, 4)).unwrap();
    let got: Vec<Antecedent> = out.frequent[0].iter().map(|s| s.antecedent).collect();
    let want: Vec<Antecedent> = freq_ground_truth().iter().map(|t| t.0).collect();
    assert_eq!(got, want);
}

#[test]
fn uniform_binary_counts() {
    let ds = gen_freq_bench(&SynthConfig { n: 1000, ..SynthConfig::freq_bench(8) }).unwrap();
    // Features X4..X10 are Bern(0.5); split rows into two pseudo-classes by X4.
    let cols = ds.categorical_columns().unwrap();
    let labels: Vec<u32> = cols[3].to_vec();
    let schema = Schema::new(vec![
        ds.schema().feature(4).clone(),
        ColumnSpec::label("Y", vec!["0".into(), "1".into()]),
    ])
    .unwrap();
    let two = Dataset::new(schema, vec![FeatureColumn::Categorical(cols[4].to_vec())], labels).unwrap();
    let singles = count_singletons(&two).unwrap();
    let sd = (1000.0f64 * 0.25 * 0.75).sqrt();
    for v in 0..2 {
        for c in 0..2 {
            assert!((singles.count(item(0, v), c) as f64 - 250.0).abs() < 4.0 * sd);
        }
    }
}

#[test]
fn per_class_capacity_for_three_classes() {
    assert_eq!(MiningConfig::unbalanced(45, 5).class_capacity(3), 15);
}

#[test]
fn pair_candidates_from_two_classes() {
    let ds = binary(&[(&[0, 0], 0), (&[1, 1], 1)], 2);
    let singles = count_singletons(&ds).unwrap();
    let fs1: Vec<_> = singles.itemsets().filter(|s| s.support > 0).collect();
    assert_eq!(fs1.len(), 4);
    let cands = generate_pair_candidates(&fs1, singles.universe());
    assert_eq!(cands.len(), 2);
    assert_eq!(cands[0].class, 0);
    assert_eq!(cands[1].class, 1);
}

#[test]
fn threshold_mining_matches_enumeration() {
    let ds = binary(
        &[
            (&[1, 0, 1], 0),
            (&[1, 1, 1], 0),
            (&[1, 1, 0], 1),
            (&[0, 1, 0], 1),
            (&[1, 0, 1], 0),
            (&[0, 0, 1], 1),
            (&[1, 1, 1], 0),
            (&[0, 1, 0], 1),
        ],
        2,
    );
    let mined = mine_with_thresholds(&ds, 0.25, 0.6, 1e-12).unwrap();
    let mut got = mined.rules;
    got.sort_by_key(|r| r.rank);
    let want = enumerate(&ds).unwrap().threshold_rules(0.25, 0.6, 1e-12).unwrap();
    assert!(!want.is_empty());
    assert_eq!(got, want);
}

#[test]
fn oracle_guards_size() {
    let ds = gen_s1(&SynthConfig { n: 10, ..SynthConfig::s1(0) }).unwrap();
    assert!(matches!(enumerate(&ds), Err(OracleError::TooLarge { p: 99, .. })));
}

#[test]
fn oracle_with_large_capacity_is_full_enumeration() {
    let ds = binary(&[(&[0, 1], 0), (&[1, 1], 1), (&[1, 0], 1)], 2);
    let e = enumerate(&ds).unwrap();
    let nonzero = e.itemsets.iter().filter(|s| s.support > 0).count();
    let top = e.topk(&MiningConfig::fixed_size(1000, 1));
    assert_eq!(top[0].len(), nonzero);
    assert_eq!(mine_frequent(&ds, &MiningConfig::fixed_size(1000, 1)).unwrap().frequent, top);
}

#[test]
fn reluctant_gate_rejects_constant_companion() {
    // X2 is always 1; (X1=1) -> 1 and (X1=1, X2=1) -> 1 have identical scores.
    let ds = binary(
        &[
            (&[1, 1], 1),
            (&[1, 1], 1),
            (&[1, 1], 0),
            (&[0, 1], 0),
            (&[0, 1], 0),
            (&[0, 1], 1),
        ],
        2,
    );
    let pair = Antecedent::pair(item(0, 1), item(1, 1)).unwrap();
    let relaxed = mine_rules(&ds, &MiningConfig::unbalanced(20, 20)).unwrap().rules;
    assert!(relaxed.iter().any(|r| r.antecedent == pair && r.class == 1));
    let reluctant = mine_rules(&ds, &MiningConfig::reluctant(20, 20)).unwrap().rules;
    assert!(reluctant.iter().all(|r| !r.antecedent.items().contains(&item(1, 1)) || !r.antecedent.is_pair()));
    assert!(reluctant.iter().any(|r| r.antecedent == Antecedent::single(item(0, 1)) && r.class == 1));
}

#[test]
fn reluctant_gate_admits_informative_pair() {
    // (X1=1, X2=1) -> 1 is pure while each parent is mixed.
    let ds = binary(
        &[
            (&[1, 1], 1),
            (&[1, 1], 1),
            (&[1, 0], 0),
            (&[0, 1], 0),
            (&[1, 0], 0),
            (&[0, 1], 0),
        ],
        2,
    );
    let pair = Antecedent::pair(item(0, 1), item(1, 1)).unwrap();
    let rules = mine_rules(&ds, &MiningConfig::reluctant(20, 20)).unwrap().rules;
    assert!(rules.iter().any(|r| r.antecedent == pair && r.class == 1));
}

fn rule(antecedent: Antecedent, class: u32) -> Rule {
    Rule {
        antecedent,
        class,
        support: 1,
        antecedent_counts: vec![1, 1],
        confidence: 0.5,
        rconf: 1.0,
        lift: 1.0,
        rank: 0,
    }
}

#[test]
fn same_antecedent_gives_one_feature() {
    let a = Antecedent::single(item(1, 1));
    let spec = generate_features(&[rule(a, 0), rule(a, 1)], FeatureMode::AppendToLabelEncoded);
    assert_eq!(spec.features(), &[a]);
    let ds = binary(&[(&[0, 1], 0)], 2);
    assert_eq!(feature_name(&ds, &a).unwrap(), "X2=1");
}

#[test]
fn s1_label_mode_width() {
    let ds = gen_s1(&SynthConfig::s1(0)).unwrap();
    let rules = mine_rules(&ds, &MiningConfig::reluctant(45, 5)).unwrap().rules;
    let spec = generate_features(&rules, FeatureMode::AppendToLabelEncoded);
    let m = transform(&ds, &spec).unwrap();
    assert!(m.cols() > 99 && m.cols() <= 104);
    assert_eq!(m.cols(), 99 + spec.len());
}

#[test]
fn one_hot_mode_keeps_only_interactions() {
    let ds = binary(&[(&[0, 1], 0), (&[1, 1], 1)], 2);
    let single = Antecedent::single(item(0, 1));
    let pair = Antecedent::pair(item(0, 1), item(1, 1)).unwrap();
    let spec = generate_features(&[rule(single, 1), rule(pair, 1)], FeatureMode::AppendInteractionsToOneHot);
    assert_eq!(spec.features(), &[pair]);
    let m = transform(&ds, &spec).unwrap();
    assert_eq!(m.names, vec!["X1=0", "X1=1", "X2=0", "X2=1", "X1=1&X2=1"]);
    assert_eq!(m.row(1), &[0.0, 1.0, 0.0, 1.0, 1.0]);
}

#[test]
fn unknown_column_is_schema_mismatch() {
    let ds = binary(&[(&[0, 1], 0)], 2);
    let mut spec = FeatureSpec::new(FeatureMode::AppendToLabelEncoded);
    spec.push(Antecedent::single(item(5, 0)));
    assert!(matches!(transform(&ds, &spec), Err(FeatureError::SchemaMismatch(_))));
}

#[test]
fn estimate_concentrates_at_large_sample() {
    let ds = gen_freq_bench(&SynthConfig { n: 100_000, ..SynthConfig::freq_bench(1) }).unwrap();
    let truth = freq_ground_truth();
    let queries: Vec<(Antecedent, Option<u32>)> = truth.iter().map(|t| (t.0, None)).collect();
    let population: Vec<f64> = queries
        .iter()
        .map(|(a, _)| itemset_frequency(&ds, a, None).unwrap())
        .collect();
    let (mut x1_close, mut all_close) = (0, 0);
    for seed in 0..200 {
        let est = estimate_frequencies(&ds, &queries, &SubsampleConfig::new(5000, seed)).unwrap();
        x1_close += ((est[0] - population[0]).abs() <= 0.02) as usize;
        all_close += est.iter().zip(truth).all(|(e, t)| (e - t.1).abs() <= 0.02) as usize;
    }
    // Two-sided Hoeffding bound at n' = 5000, eps = 0.02: 1 - 2 exp(-4) = 0.963.
    assert!(x1_close as f64 / 200.0 >= 1.0 - 2.0 * (-2.0f64 * 5000.0 * 0.0004).exp());
    assert!(all_close as f64 / 200.0 >= 0.95, "{all_close}/200");
}

#[test]
fn ground_truth_rules_listed() {
    let names: Vec<String> = {
        let ds = gen_s1(&SynthConfig { n: 5, ..SynthConfig::s1(0) }).unwrap();
        s1_ground_truth()
            .iter()
            .map(|(a, c)| format!("{}->{c}", feature_name(&ds, a).unwrap()))
            .collect()
    };
    assert_eq!(
        names,
        vec!["X1=0->0", "X1=1&X2=0->1", "X1=1&X3=0->1", "X1=1&X2=1->2", "X1=1&X3=1->2"]
    );
}
