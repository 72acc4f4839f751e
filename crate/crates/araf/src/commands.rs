//! Subcommands of the `araf` binary.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use araf_core::bench::{
    freq_trial, run_trial, s1_ground_truth, BenchConfig, FreqTrial, Method, RecoveryCounts, Trial,
};
use araf_core::dataset::Dataset;
use araf_core::discretize::{apply_to_dataset, fit_dataset, DiscretizationMap, DEFAULT_QUANTILES};
use araf_core::features::{feature_name, suggest_params, transform, FeatureMode, FeatureSpec};
use araf_core::logreg::LogRegConfig;
use araf_core::miner::{mine_with_thresholds, MiningConfig, Scoring, DEFAULT_EPSILON};
use araf_core::pipeline::mine_rules_with;
use araf_core::sampler::SubsampleConfig;
use araf_core::synth::{SynthConfig, Variant};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::csv_io::{load_csv, write_dataset, write_matrix, KindOverride};
use crate::error::AppError;
use crate::formats::{
    frequent_record, read_json, resolve_antecedent, rule_record, to_json, DiscretizationFile,
    FeatureSpecFile, RuleRecord, RulesFile, RulesMetadata, SubsampleRecord,
};
use crate::manifest::{manifest_path, RunManifest};
use crate::parallel::{resolve_threads, Threaded};

#[derive(Debug, Parser)]
#[command(name = "araf", version, about = "Class association rule mining and feature generation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit entropy-based interval maps to continuous columns.
    Discretize(DiscretizeArgs),
    /// Mine class association rules.
    Mine(MineArgs),
    /// Append rule features to a dataset.
    Transform(TransformArgs),
    /// Run the synthetic benchmarks.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Name of the class column.
    #[arg(long)]
    pub label: String,
    /// Force a column kind, e.g. `age=categorical` (repeatable). `*=categorical`
    /// applies to every column not named otherwise.
    #[arg(long = "column-kind", value_name = "NAME=KIND")]
    pub column_kind: Vec<KindOverride>,
}

#[derive(Debug, Args)]
pub struct DiscretizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Intervals per column.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Quantile candidates examined per interval.
    #[arg(long, default_value_t = DEFAULT_QUANTILES)]
    pub l: usize,
    #[arg(long)]
    pub out_map: PathBuf,
    #[arg(long)]
    pub out_data: PathBuf,
    /// Manifest path (default: `<out-data>.manifest.json`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoringArg {
    Conf,
    Rconf,
    Lift,
}

impl From<ScoringArg> for Scoring {
    fn from(s: ScoringArg) -> Self {
        match s {
            ScoringArg::Conf => Scoring::Confidence,
            ScoringArg::Rconf => Scoring::RelativeConfidence,
            ScoringArg::Lift => Scoring::Lift,
        }
    }
}

fn scoring_name(s: Scoring) -> &'static str {
    match s {
        Scoring::Confidence => "conf",
        Scoring::RelativeConfidence => "rconf",
        Scoring::Lift => "lift",
    }
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Frequent itemsets kept (default 5|C|floor(sqrt p)).
    #[arg(long)]
    pub d_freq: Option<usize>,
    /// Rules selected (default 5 floor(sqrt p)).
    #[arg(long)]
    pub d_conf: Option<usize>,
    /// Rule score; defaults to rconf with --per-class or --reluctant, else conf.
    #[arg(long, value_enum)]
    pub scoring: Option<ScoringArg>,
    /// Split the frequent-set budget across classes.
    #[arg(long)]
    pub per_class: bool,
    /// Keep a pair rule only when it beats its one-item parents. Implies
    /// --per-class.
    #[arg(long)]
    pub reluctant: bool,
    /// Threshold mode: minimum support fraction.
    #[arg(long)]
    pub minsupp: Option<f64>,
    /// Threshold mode: minimum confidence.
    #[arg(long)]
    pub minconf: Option<f64>,
    /// Mine frequent itemsets on N records drawn with replacement.
    #[arg(long, value_name = "N")]
    pub subsample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// With --subsample, score rules on subsample counts instead of a full recount.
    #[arg(long)]
    pub approximate_confidence: bool,
    /// Smoothing term of relative confidence.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long)]
    pub out_rules: PathBuf,
    /// Also write the frequent itemsets as JSON lines.
    #[arg(long)]
    pub out_frequent: Option<PathBuf>,
    /// Manifest path (default: `<out-rules>.manifest.json`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Counting workers (falls back to ARAF_THREADS, then all cores).
    #[arg(long, env = "ARAF_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Label-encoded columns plus every rule feature.
    Label,
    /// One-hot columns plus the interaction features.
    Onehot,
}

impl From<ModeArg> for FeatureMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Label => FeatureMode::AppendToLabelEncoded,
            ModeArg::Onehot => FeatureMode::AppendInteractionsToOneHot,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Rules JSON written by `mine`.
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long, value_enum, default_value = "label")]
    pub mode: ModeArg,
    /// Interval map written by `discretize`, applied before the features.
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the feature specification as JSON.
    #[arg(long)]
    pub out_spec: Option<PathBuf>,
    /// Manifest path (default: `<out>.manifest.json`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Freq,
    S1,
    S2,
}

impl VariantArg {
    fn name(self) -> &'static str {
        match self {
            VariantArg::Freq => "freq",
            VariantArg::S1 => "s1",
            VariantArg::S2 => "s2",
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Seed of the first trial; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 45)]
    pub d_freq: usize,
    #[arg(long, default_value_t = 5)]
    pub d_conf: usize,
    /// L2 penalty of the logistic regression.
    #[arg(long, default_value_t = 1.0)]
    pub penalty: f64,
    /// Subsample sizes for the freq variant.
    #[arg(long, value_delimiter = ',', default_values_t = [100, 500, 1000, 5000])]
    pub sizes: Vec<usize>,
    /// Results CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Rule recovery counts CSV (s1 and s2).
    #[arg(long)]
    pub out_recovery: Option<PathBuf>,
    /// Manifest path (default: `<out>.manifest.json`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Trials run concurrently (falls back to ARAF_THREADS, then all cores).
    #[arg(long, env = "ARAF_THREADS")]
    pub threads: Option<usize>,
}

pub fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Discretize(a) => discretize(a),
        Command::Mine(a) => mine(a),
        Command::Transform(a) => transform_cmd(a),
        Command::Bench(a) => bench(a),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, AppError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| AppError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<(), AppError> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| AppError::io(path, e))
}

fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<(), csv::Error>,
) -> Result<(), AppError> {
    let mut w = create(path)?;
    f(&mut w).map_err(|e| AppError::format(path, e))?;
    w.flush().map_err(|e| AppError::io(path, e))
}

fn write_manifest(m: &RunManifest, primary: &Path, explicit: Option<&Path>) -> Result<(), AppError> {
    write_text(&manifest_path(primary, explicit), &to_json(m))
}

fn load(input: &InputArgs, manifest: &mut RunManifest) -> Result<Dataset, AppError> {
    manifest.input(&input.input)?;
    manifest.param("input", input.input.display().to_string());
    manifest.param("label", &input.label);
    let kinds: Vec<String> = input
        .column_kind
        .iter()
        .map(|o| format!("{}={:?}", o.column, o.kind).to_lowercase())
        .collect();
    manifest.param("column_kind", kinds);
    Ok(load_csv(&input.input, &input.label, &input.column_kind)?)
}

fn discretize(a: DiscretizeArgs) -> Result<(), AppError> {
    let mut m = RunManifest::new("discretize");
    let ds = load(&a.input, &mut m)?;
    m.param("k", a.k).param("l", a.l);
    let (map, degenerate) = fit_dataset(&ds, a.k, a.l)?;
    for name in &degenerate {
        eprintln!("warning: column `{name}` has too few distinct values for k={}", a.k);
    }
    m.param("degenerate_columns", &degenerate);
    let out = apply_to_dataset(&ds, &map)?;
    write_text(&a.out_map, &to_json(&DiscretizationFile::from(&map)))?;
    write_with(&a.out_data, |w| write_dataset(w, &out))?;
    write_manifest(&m, &a.out_data, a.manifest.as_deref())
}

fn mine(a: MineArgs) -> Result<(), AppError> {
    let threshold = a.minsupp.is_some() || a.minconf.is_some();
    if threshold && (a.d_freq.is_some() || a.d_conf.is_some()) {
        return Err(AppError::ConflictingFlags(
            "--minsupp/--minconf cannot be combined with --d-freq/--d-conf".into(),
        ));
    }
    if threshold && (a.per_class || a.reluctant || a.scoring.is_some() || a.subsample.is_some()) {
        return Err(AppError::ConflictingFlags(
            "threshold mode takes none of --scoring, --per-class, --reluctant, --subsample".into(),
        ));
    }
    let mut m = RunManifest::new("mine");
    let ds = load(&a.input, &mut m)?;
    m.param("epsilon", a.epsilon);
    let metadata = |mode: &str, subsample: Option<SubsampleRecord>| RulesMetadata {
        mode: mode.to_string(),
        n: ds.n(),
        p: ds.p(),
        classes: ds.num_classes(),
        subsample,
    };

    let (file, frequent) = if threshold {
        let (Some(minsupp), Some(minconf)) = (a.minsupp, a.minconf) else {
            return Err(AppError::Usage("threshold mode needs both --minsupp and --minconf".into()));
        };
        m.param("mode", "threshold").param("minsupp", minsupp).param("minconf", minconf);
        let out = mine_with_thresholds(&ds, minsupp, minconf, a.epsilon)?;
        let rules = out.rules.iter().map(|r| rule_record(&ds, r)).collect();
        let frequent: Vec<_> = out.frequent.iter().map(frequent_record).collect();
        (
            RulesFile {
                metadata: metadata("threshold", None),
                rules,
            },
            frequent,
        )
    } else {
        let (sf, sc) = suggest_params(ds.p(), ds.num_classes());
        let d_freq = a.d_freq.unwrap_or(sf);
        let d_conf = a.d_conf.unwrap_or(sc.min(d_freq));
        let per_class = a.per_class || a.reluctant;
        let scoring = a.scoring.map(Scoring::from).unwrap_or(if per_class {
            Scoring::RelativeConfidence
        } else {
            Scoring::Confidence
        });
        let subsample = a.subsample.map(|n| SubsampleConfig::new(n, a.seed));
        let config = MiningConfig {
            d_freq,
            d_conf,
            per_class,
            scoring,
            reluctant: a.reluctant,
            epsilon: a.epsilon,
            subsample,
            exact_confidence: !a.approximate_confidence,
        };
        let threads = resolve_threads(a.threads);
        m.param("mode", "fixed-size")
            .param("d_freq", d_freq)
            .param("d_conf", d_conf)
            .param("per_class", per_class)
            .param("reluctant", a.reluctant)
            .param("scoring", scoring_name(scoring))
            .param("subsample", a.subsample)
            .param("exact_confidence", config.exact_confidence)
            .param("threads", threads);
        if subsample.is_some() {
            m.seed = Some(a.seed);
        }
        let mined = mine_rules_with(&ds, &config, &Threaded::new(threads))?;
        let rules: Vec<RuleRecord> = mined.rules.iter().map(|r| rule_record(&ds, r)).collect();
        let frequent: Vec<_> = mined.output.itemsets().map(frequent_record).collect();
        let sub = subsample.map(|s| SubsampleRecord {
            n_prime: s.n_prime,
            seed: s.seed,
            with_replacement: s.with_replacement,
        });
        (
            RulesFile {
                metadata: metadata("fixed-size", sub),
                rules,
            },
            frequent,
        )
    };

    write_text(&a.out_rules, &to_json(&file))?;
    if let Some(path) = &a.out_frequent {
        let mut text = String::new();
        for f in &frequent {
            text.push_str(&serde_json::to_string(f).expect("serializable"));
            text.push('\n');
        }
        write_text(path, &text)?;
    }
    write_manifest(&m, &a.out_rules, a.manifest.as_deref())
}

fn transform_cmd(a: TransformArgs) -> Result<(), AppError> {
    let mut m = RunManifest::new("transform");
    let ds = load(&a.input, &mut m)?;
    m.input(&a.rules)?;
    m.param("rules", a.rules.display().to_string());
    let mode = FeatureMode::from(a.mode);
    m.param("mode", if mode == FeatureMode::AppendToLabelEncoded { "label" } else { "onehot" });
    let (ds, map): (Dataset, Option<DiscretizationMap>) = match &a.map {
        Some(path) => {
            m.input(path)?;
            m.param("map", path.display().to_string());
            let map = read_json::<DiscretizationFile>(path)?.to_map(path)?;
            (apply_to_dataset(&ds, &map)?, Some(map))
        }
        None => (ds, None),
    };
    let rules: RulesFile = read_json(&a.rules)?;
    let mut spec = FeatureSpec::new(mode);
    for r in &rules.rules {
        spec.push(resolve_antecedent(&ds, &r.antecedent)?);
    }
    spec.discretization = map;
    let matrix = transform(&ds, &spec)?;
    write_with(&a.out, |w| write_matrix(w, &matrix, &ds))?;
    if let Some(path) = &a.out_spec {
        write_text(path, &to_json(&FeatureSpecFile::from_spec(&ds, &spec)))?;
    }
    write_manifest(&m, &a.out, a.manifest.as_deref())
}

/// Runs `job(i)` for `i in 0..count` on up to `threads` workers; results
/// come back in index order.
fn parallel_map<T: Send>(
    count: usize,
    threads: usize,
    job: impl Fn(usize) -> Result<T, AppError> + Sync,
) -> Result<Vec<T>, AppError> {
    let slots: Vec<Mutex<Option<Result<T, AppError>>>> = (0..count).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..threads.clamp(1, count.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                *slots[i].lock().unwrap() = Some(job(i));
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every slot filled"))
        .collect()
}

fn bench(a: BenchArgs) -> Result<(), AppError> {
    if a.trials == 0 {
        return Err(AppError::Usage("--trials must be at least 1".into()));
    }
    let threads = resolve_threads(a.threads);
    let mut m = RunManifest::new("bench");
    m.seed = Some(a.seed);
    m.param("variant", a.variant.name())
        .param("trials", a.trials)
        .param("d_freq", a.d_freq)
        .param("d_conf", a.d_conf)
        .param("threads", threads);
    let seeds: Vec<u64> = (0..a.trials).map(|i| a.seed.wrapping_add(i)).collect();

    if a.variant == VariantArg::Freq {
        if a.sizes.is_empty() || a.sizes.contains(&0) {
            return Err(AppError::Usage("--sizes must list positive sample sizes".into()));
        }
        m.param("sizes", &a.sizes);
        let jobs: Vec<(usize, u64)> = a
            .sizes
            .iter()
            .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
            .collect();
        let results: Vec<FreqTrial> = parallel_map(jobs.len(), threads, |i| {
            let (n, s) = jobs[i];
            Ok(freq_trial(&SynthConfig::freq_bench(s), n, a.d_freq)?)
        })?;
        write_with(&a.out, |w| {
            let mut w = csv::Writer::from_writer(w);
            w.write_record(["variant", "n_prime", "seed", "recovered", "mean_abs_error"])?;
            for t in &results {
                w.write_record([
                    "freq".to_string(),
                    t.n_prime.to_string(),
                    t.seed.to_string(),
                    t.recovered.to_string(),
                    t.mean_abs_error.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        })?;
        return write_manifest(&m, &a.out, a.manifest.as_deref());
    }

    m.param("penalty", a.penalty);
    let variant = if a.variant == VariantArg::S1 { Variant::S1 } else { Variant::S2 };
    let config = BenchConfig {
        d_freq: a.d_freq,
        d_conf: a.d_conf,
        logreg: LogRegConfig {
            penalty: a.penalty,
            ..LogRegConfig::default()
        },
        ..BenchConfig::default()
    };
    if let Some(mc) = Method::Alg4.config(a.d_freq, a.d_conf) {
        mc.validate()?;
    }
    let trials: Vec<Trial> =
        parallel_map(seeds.len(), threads, |i| Ok(run_trial(variant, seeds[i], &config)?))?;
    write_with(&a.out, |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["variant", "method", "seed", "logloss", "accuracy"])?;
        for t in &trials {
            for r in &t.results {
                w.write_record([
                    a.variant.name().to_string(),
                    r.method.name().to_string(),
                    t.seed.to_string(),
                    r.logloss.to_string(),
                    r.accuracy.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    })?;
    if let Some(path) = &a.out_recovery {
        write_recovery(path, variant, &trials)?;
    }
    write_manifest(&m, &a.out, a.manifest.as_deref())
}

/// One row per rule: the five S1 ground-truth rules first, then every other
/// selected rule by decreasing total count.
fn write_recovery(path: &Path, variant: Variant, trials: &[Trial]) -> Result<(), AppError> {
    let mut counts: Vec<RecoveryCounts> = vec![RecoveryCounts::default(); Method::MINED.len()];
    for t in trials {
        for (c, &method) in counts.iter_mut().zip(Method::MINED.iter()) {
            c.add(t.rules_of(method));
        }
    }
    let synth = match variant {
        Variant::S2 => SynthConfig::s2(0),
        _ => SynthConfig::s1(0),
    };
    let ds = araf_core::synth::generate(&SynthConfig { n: 1, ..synth })
        .map_err(|e| AppError::Internal(e.to_string()))?;
    let truth = s1_ground_truth();
    let mut keys: Vec<_> = truth.to_vec();
    let mut others: Vec<_> = counts
        .iter()
        .flat_map(|c| c.counts.keys().copied())
        .filter(|k| !truth.contains(k))
        .collect();
    others.sort();
    others.dedup();
    let total = |k: &(_, u32)| counts.iter().map(|c| c.count(&k.0, k.1)).sum::<usize>();
    others.sort_by(|a, b| total(b).cmp(&total(a)).then(a.cmp(b)));
    keys.extend(others);

    let label = ds.schema().label();
    let mut rows = Vec::with_capacity(keys.len());
    for (i, (ante, class)) in keys.iter().enumerate() {
        let mut row = vec![
            feature_name(&ds, ante)?,
            label.categories[*class as usize].clone(),
            (i < truth.len()).to_string(),
        ];
        row.extend(counts.iter().map(|c| c.count(ante, *class).to_string()));
        rows.push(row);
    }
    write_with(path, |w| {
        let mut w = csv::Writer::from_writer(w);
        let mut header = vec!["antecedent", "class", "ground_truth"];
        header.extend(Method::MINED.iter().map(|m| m.name()));
        w.write_record(&header)?;
        for r in &rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    })
}
