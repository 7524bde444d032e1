//! The `pasv` command line.
//!
//! Exit codes: 0 success, 1 a limit check that should converge did not,
//! 2 configuration or input error, 3 utility failure, 4 extension count
//! above the cap.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::formats::{
    parse_inline_weights, read_dag, read_grouping, read_lineage, read_weights, write_atomic,
    LabeledPoset,
};
use crate::order_model::{exact_pasv_distribution, Weights};
use crate::poset::{PlayerSet, DEFAULT_EXTENSION_CAP};
use crate::rng::derive_seed;
use crate::sampler::{mh_sample, MhConfig};
use crate::sweep::{
    default_grid, estimate, limit_mismatch_demo, limit_reference, limit_tv_profile, run_sweep,
    Estimator, LimitTarget, SweepSpec, LIMIT_LEVELS,
};
use crate::utility::{
    elementary_game, external_utility, knn_imputation_utility, LogisticPredictor, TabularDataset,
    TableUtility, UtilityFn,
};
use crate::valuation::{group_values, group_values_csv, ValueReport};

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UTILITY: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// Largest TV distance accepted at the last level of a limit check.
pub const LIMIT_TOLERANCE: f64 = 1e-4;
/// Smallest TV distance reported as a clear mismatch.
pub const MISMATCH_THRESHOLD: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(name = "pasv", version, about = "Priority-aware random order values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute per-player values.
    Value(ValueArgs),
    /// Recompute values while a target's weight moves along a grid.
    Sweep(SweepArgs),
    /// Draw linear extensions with the Metropolis-Hastings chain.
    Sample(SampleArgs),
    /// Count linear extensions and optionally list their probabilities.
    Enumerate(EnumerateArgs),
    /// Compare extreme-weight distributions with hard-order limits.
    LimitCheck(LimitCheckArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// JSON config file; flags override its fields.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// DAG file (labelled or compact JSON form).
    #[arg(long, value_name = "PATH")]
    dag: Option<PathBuf>,
    /// Weights file ({"lambda": ..} or {"base": .., "exponents": ..}).
    #[arg(long, value_name = "PATH")]
    weights: Option<PathBuf>,
    /// Inline weights "label=value,...", applied after --weights.
    #[arg(long, value_name = "SPEC")]
    lambda: Option<String>,
    /// Master seed; every random stream is derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of linear extensions to enumerate.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum EstimatorKind {
    Exact,
    Mh,
    Auto,
}

#[derive(Debug, Args)]
struct EstimatorArgs {
    /// exact enumerates, mh samples, auto picks exact when within --cap.
    #[arg(long, value_enum)]
    estimator: Option<EstimatorKind>,
    /// Number of recorded samples.
    #[arg(long)]
    n_mc: Option<usize>,
    /// Steps discarded before recording.
    #[arg(long)]
    burn_in: Option<usize>,
    /// Steps between recorded samples.
    #[arg(long)]
    thinning: Option<usize>,
}

#[derive(Debug, Args)]
struct UtilityArgs {
    /// table:PATH | elementary:LABEL,... | lineage:PATH | external:CMD ARGS |
    /// knn:train=PATH,eval=PATH,model=PATH,label=COL[,k=K][,n_eval=M]
    #[arg(long, value_name = "SPEC")]
    utility: Option<String>,
    /// Per-request timeout for external utilities, in milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Output format; inferred from the --output extension by default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ValueArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    estimator: EstimatorArgs,
    #[command(flatten)]
    utility: UtilityArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Grouping file {label: group}; adds a group report.
    #[arg(long, value_name = "PATH")]
    grouping: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReferenceMode {
    Maximal,
    Refine,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    estimator: EstimatorArgs,
    #[command(flatten)]
    utility: UtilityArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Grouping file; rows then hold group sums.
    #[arg(long, value_name = "PATH")]
    grouping: Option<PathBuf>,
    /// Player label(s) whose weight is swept, comma separated.
    #[arg(long, value_name = "LABELS", required = true)]
    target: String,
    /// Comma-separated multipliers; defaults to 2^-8 .. 2^8.
    #[arg(long, value_name = "LIST")]
    grid: Option<String>,
    /// Add limit reference rows computed on the modified poset.
    #[arg(long, value_enum)]
    limit_reference: Option<ReferenceMode>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Number of permutations to record.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    thinning: Option<usize>,
    /// Output file (JSON lines of 0-based player indices); stdout when absent.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Also write every extension with its probability as JSON lines.
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LimitMode {
    Maximal,
    Refine,
    Edges,
}

#[derive(Debug, Args)]
struct LimitCheckArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Maximal or refine: convergence to that construction. Edges: comparison with --candidate-edge.
    #[arg(long, value_enum)]
    mode: LimitMode,
    /// Target player label(s), comma separated (one label except in refine mode).
    #[arg(long, value_name = "LABELS")]
    target: String,
    /// Candidate edge FROM:TO for edges mode; repeatable.
    #[arg(long = "candidate-edge", value_name = "FROM:TO")]
    candidate_edges: Vec<String>,
}

/// Config file fields. Paths are taken relative to the working directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dag: Option<PathBuf>,
    weights: Option<PathBuf>,
    lambda: Option<String>,
    seed: Option<u64>,
    cap: Option<usize>,
    estimator: Option<EstimatorKind>,
    n_mc: Option<usize>,
    burn_in: Option<usize>,
    thinning: Option<usize>,
    utility: Option<String>,
    timeout_ms: Option<u64>,
    grouping: Option<PathBuf>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<FileConfig> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

struct Problem {
    dag: LabeledPoset,
    weights: Weights,
    seed: u64,
    cap: usize,
}

fn load_problem(args: &ProblemArgs, cfg: &FileConfig) -> Result<Problem> {
    let dag_path = args
        .dag
        .as_ref()
        .or(cfg.dag.as_ref())
        .ok_or_else(|| Error::InvalidConfig("no DAG given (--dag)".into()))?;
    let dag = read_dag(dag_path)?;
    let mut weights = match args.weights.as_ref().or(cfg.weights.as_ref()) {
        Some(p) => read_weights(p, &dag)?,
        None => Weights::uniform(dag.n()),
    };
    if let Some(spec) = args.lambda.as_ref().or(cfg.lambda.as_ref()) {
        weights = parse_inline_weights(spec, &dag, &weights)?;
    }
    let cap = args.cap.or(cfg.cap).unwrap_or(DEFAULT_EXTENSION_CAP);
    if cap == 0 {
        return Err(Error::InvalidConfig("cap must be positive".into()));
    }
    Ok(Problem {
        dag,
        weights,
        seed: args.seed.or(cfg.seed).unwrap_or(0),
        cap,
    })
}

fn mh_config(
    n: usize,
    n_mc: Option<usize>,
    burn_in: Option<usize>,
    thinning: Option<usize>,
    cfg: &FileConfig,
) -> Result<MhConfig> {
    let d = MhConfig::default_for(n);
    let c = MhConfig::new(
        n_mc.or(cfg.n_mc).unwrap_or(d.n_mc),
        burn_in.or(cfg.burn_in).unwrap_or(d.burn_in),
        thinning.or(cfg.thinning).unwrap_or(d.thinning),
        0,
    );
    c.validate()?;
    Ok(c)
}

fn build_estimator(args: &EstimatorArgs, p: &Problem, cfg: &FileConfig) -> Result<Estimator> {
    let mh = mh_config(p.dag.n(), args.n_mc, args.burn_in, args.thinning, cfg)?;
    Ok(
        match args.estimator.or(cfg.estimator).unwrap_or(EstimatorKind::Auto) {
            EstimatorKind::Exact => Estimator::Exact { cap: p.cap },
            EstimatorKind::Mh => Estimator::Mh(mh),
            EstimatorKind::Auto => Estimator::Auto { cap: p.cap, mh },
        },
    )
}

fn key_values(spec: &str) -> Result<BTreeMap<String, String>> {
    spec.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::InvalidConfig(format!("expected key=value, got {kv:?}")))
        })
        .collect()
}

fn build_utility(args: &UtilityArgs, p: &Problem, cfg: &FileConfig) -> Result<Arc<dyn UtilityFn>> {
    let spec = args
        .utility
        .as_ref()
        .or(cfg.utility.as_ref())
        .ok_or_else(|| Error::InvalidConfig("no utility given (--utility)".into()))?;
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidConfig(format!("utility spec {spec:?} has no kind prefix")))?;
    let n = p.dag.n();
    Ok(match kind {
        "table" => Arc::new(TableUtility::from_csv(Path::new(rest), n, None)?),
        "elementary" => {
            let t = p.dag.set_of(rest.split(',').map(str::trim).filter(|s| !s.is_empty()))?;
            Arc::new(elementary_game(t))
        }
        "lineage" => Arc::new(read_lineage(Path::new(rest), &p.dag)?),
        "external" => {
            let command: Vec<String> = rest.split_whitespace().map(String::from).collect();
            let ms = args.timeout_ms.or(cfg.timeout_ms).unwrap_or(30_000);
            Arc::new(external_utility(&command, Duration::from_millis(ms))?)
        }
        "knn" => {
            let kv = key_values(rest)?;
            let get = |k: &str| {
                kv.get(k)
                    .ok_or_else(|| Error::InvalidConfig(format!("knn utility needs {k}=")))
            };
            let num = |k: &str, default: usize| -> Result<usize> {
                kv.get(k).map_or(Ok(default), |v| {
                    v.parse()
                        .map_err(|_| Error::InvalidConfig(format!("knn {k}={v:?} is not a count")))
                })
            };
            let label = get("label")?;
            let train = TabularDataset::from_csv(Path::new(get("train")?), label)?;
            let eval = TabularDataset::from_csv(Path::new(get("eval")?), label)?;
            if train.n_features() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{} features but {n} players",
                    train.n_features()
                )));
            }
            let model = LogisticPredictor::from_json(Path::new(get("model")?))?;
            let n_eval = num("n_eval", eval.len())?;
            Arc::new(knn_imputation_utility(
                train,
                eval,
                Arc::new(model),
                num("k", 5)?,
                n_eval,
                derive_seed(p.seed, "knn"),
            )?)
        }
        other => {
            return Err(Error::InvalidConfig(format!("unknown utility kind {other:?}")));
        }
    })
}

fn output_format(path: Option<&Path>, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.and_then(|p| p.extension()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// `out.csv` becomes `out.groups.csv`.
fn groups_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.groups.{}", ext.to_string_lossy()),
        None => format!("{stem}.groups"),
    };
    path.with_file_name(name)
}

fn efficiency_line(r: &ValueReport) -> String {
    format!(
        "efficiency: sum of values {} vs U(N) - U(empty) {} (gap {:.3e})",
        r.realized_sum,
        r.total(),
        r.efficiency_gap()
    )
}

fn cmd_value(a: ValueArgs) -> Result<i32> {
    let cfg = FileConfig::load(a.problem.config.as_deref())?;
    let p = load_problem(&a.problem, &cfg)?;
    let estimator = build_estimator(&a.estimator, &p, &cfg)?;
    let grouping = match a.grouping.as_ref().or(cfg.grouping.as_ref()) {
        Some(g) => Some(read_grouping(g, &p.dag)?),
        None => None,
    };
    let u = build_utility(&a.utility, &p, &cfg)?;
    let report = estimate(
        &p.dag.poset,
        &p.weights,
        &u,
        &estimator,
        derive_seed(p.seed, "value"),
    )?;
    let groups = grouping.as_ref().map(|g| group_values(&report, g)).transpose()?;

    let out = a.output.output.as_deref().or(cfg.output.as_deref());
    match output_format(out, a.output.format.or(cfg.format)) {
        Format::Csv => {
            emit(out, &report.to_csv(&p.dag.labels))?;
            if let Some(g) = &groups {
                let csv = group_values_csv(g, report.n_samples);
                match out {
                    Some(path) => write_atomic(&groups_path(path), csv.as_bytes())?,
                    None => print!("{csv}"),
                }
            }
        }
        Format::Json => {
            let mut doc = report.to_json(&p.dag.labels);
            doc["estimator"] = json!(estimator.label());
            if let Some(g) = &groups {
                doc["groups"] = serde_json::to_value(g).expect("group values serialize");
            }
            emit(out, &format!("{doc:#}\n"))?;
        }
    }
    eprintln!("{}", efficiency_line(&report));
    Ok(0)
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("bad grid value {s:?}")))
        })
        .collect()
}

fn cmd_sweep(a: SweepArgs) -> Result<i32> {
    let cfg = FileConfig::load(a.problem.config.as_deref())?;
    let p = load_problem(&a.problem, &cfg)?;
    let estimator = build_estimator(&a.estimator, &p, &cfg)?;
    let grouping = match a.grouping.as_ref().or(cfg.grouping.as_ref()) {
        Some(g) => Some(read_grouping(g, &p.dag)?),
        None => None,
    };
    let target = p.dag.set_of(a.target.split(',').map(str::trim))?;
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => default_grid(),
    };
    let limit = a
        .limit_reference
        .map(|mode| reference_target(mode, &p, &target))
        .transpose()?;
    let u = build_utility(&a.utility, &p, &cfg)?;
    let spec = SweepSpec::new(target, grid, p.weights.clone(), estimator.clone())
        .with_seed(derive_seed(p.seed, "sweep"));
    let mut report = run_sweep(&p.dag.poset, &spec, &u)?;
    if let Some(t) = &limit {
        report.reference = Some(limit_reference(
            &p.dag.poset,
            &p.weights,
            t,
            &u,
            &estimator,
            derive_seed(p.seed, "limit-reference"),
        )?);
    }

    let out = a.output.output.as_deref().or(cfg.output.as_deref());
    match output_format(out, a.output.format.or(cfg.format)) {
        Format::Csv => emit(out, &report.to_csv(&p.dag.labels, grouping.as_ref())?)?,
        Format::Json => {
            let point = |r: &ValueReport| -> Result<serde_json::Value> {
                let mut v = r.to_json(&p.dag.labels);
                if let Some(g) = &grouping {
                    v["groups"] = serde_json::to_value(group_values(r, g)?).expect("serialize");
                }
                Ok(v)
            };
            let points = report
                .points
                .iter()
                .map(|pt| Ok(json!({"b": pt.b, "report": point(&pt.report)?})))
                .collect::<Result<Vec<_>>>()?;
            let reference = report.reference.as_ref().map(point).transpose()?;
            let doc = json!({
                "target": a.target,
                "estimator": report.estimator,
                "points": points,
                "reference": reference,
            });
            emit(out, &format!("{doc:#}\n"))?;
        }
    }
    Ok(0)
}

fn single_target(p: &Problem, target: &PlayerSet) -> Result<usize> {
    match target.len() {
        1 => Ok(target.iter().next().expect("one member")),
        _ => Err(Error::InvalidConfig(
            "this mode needs exactly one target player".into(),
        )),
    }
    .and_then(|i| {
        if i < p.dag.n() {
            Ok(i)
        } else {
            Err(Error::IndexOutOfRange { index: i, n: p.dag.n() })
        }
    })
}

fn reference_target(mode: ReferenceMode, p: &Problem, target: &PlayerSet) -> Result<LimitTarget> {
    match mode {
        ReferenceMode::Maximal => Ok(LimitTarget::Maximal(single_target(p, target)?)),
        ReferenceMode::Refine => {
            let partition = p
                .dag
                .poset
                .detect_ordered_partition()
                .ok_or(Error::NotOrderedPartition)?;
            let layer = partition
                .layer_containing(target)
                .ok_or(Error::SubsetNotInLayer { layer: 0 })?;
            Ok(LimitTarget::Refine {
                layer,
                group: target.clone(),
            })
        }
    }
}

fn cmd_sample(a: SampleArgs) -> Result<i32> {
    let cfg = FileConfig::load(a.problem.config.as_deref())?;
    let p = load_problem(&a.problem, &cfg)?;
    let mh = mh_config(p.dag.n(), a.count, a.burn_in, a.thinning, &cfg)?
        .with_seed(derive_seed(p.seed, "sample"));
    let (samples, stats) = mh_sample(&p.dag.poset, &p.weights, &mh, None)?;
    let mut out = String::new();
    for pi in &samples {
        out.push_str(&serde_json::to_string(pi.order()).expect("indices serialize"));
        out.push('\n');
    }
    emit(a.output.as_deref().or(cfg.output.as_deref()), &out)?;
    eprintln!(
        "{} samples, {} steps, acceptance rate {:.4}",
        samples.len(),
        stats.steps_total,
        stats.acceptance_rate
    );
    Ok(0)
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<i32> {
    let cfg = FileConfig::load(a.problem.config.as_deref())?;
    let p = load_problem(&a.problem, &cfg)?;
    if !a.list {
        println!("{}", p.dag.poset.count_linear_extensions(p.cap)?);
        return Ok(0);
    }
    let d = exact_pasv_distribution(&p.dag.poset, &p.weights, p.cap)?;
    let mut out = String::new();
    for (pi, prob) in d.iter() {
        let order: Vec<&str> = pi.order().iter().map(|&i| p.dag.labels[i].as_str()).collect();
        out.push_str(&format!("{}\n", json!({"order": order, "probability": prob})));
    }
    emit(a.output.as_deref().or(cfg.output.as_deref()), &out)?;
    let total: f64 = d.probabilities().iter().sum();
    eprintln!("{} extensions, probabilities sum to {total}", d.len());
    if a.output.is_some() || cfg.output.is_some() {
        println!("{}", d.len());
    }
    Ok(0)
}

fn parse_edge(p: &Problem, s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidConfig(format!("candidate edge {s:?} is not FROM:TO")))?;
    Ok((p.dag.index_of(a.trim())?, p.dag.index_of(b.trim())?))
}

fn cmd_limit_check(a: LimitCheckArgs) -> Result<i32> {
    let cfg = FileConfig::load(a.problem.config.as_deref())?;
    let p = load_problem(&a.problem, &cfg)?;
    let target = p.dag.set_of(a.target.split(',').map(str::trim))?;
    let lim = match a.mode {
        LimitMode::Maximal => reference_target(ReferenceMode::Maximal, &p, &target)?,
        LimitMode::Refine => reference_target(ReferenceMode::Refine, &p, &target)?,
        LimitMode::Edges => {
            if a.candidate_edges.is_empty() {
                return Err(Error::InvalidConfig("edges mode needs --candidate-edge".into()));
            }
            let i = single_target(&p, &target)?;
            let edges = a
                .candidate_edges
                .iter()
                .map(|e| parse_edge(&p, e))
                .collect::<Result<Vec<_>>>()?;
            let tv = limit_mismatch_demo(&p.dag.poset, &p.weights, i, &edges, p.cap)?;
            let verdict = if tv > MISMATCH_THRESHOLD {
                "non-equivalent"
            } else if tv < LIMIT_TOLERANCE {
                "equivalent"
            } else {
                "inconclusive"
            };
            println!("tv {tv:.6e}");
            println!("verdict {verdict}");
            return Ok(0);
        }
    };
    let tv = limit_tv_profile(&p.dag.poset, &p.weights, &lim, &LIMIT_LEVELS, p.cap)?;
    for (level, d) in LIMIT_LEVELS.iter().zip(&tv) {
        println!("lambda {level:e} tv {d:.6e}");
    }
    let decreasing = tv.windows(2).all(|w| w[1] < w[0]);
    let converged = decreasing && tv.last().is_some_and(|&t| t < LIMIT_TOLERANCE);
    println!("verdict {}", if converged { "converged" } else { "not-converged" });
    Ok(if converged { 0 } else { EXIT_CHECK_FAILED })
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ExtensionCountExceedsCap { .. } => EXIT_CAP,
        e if e.is_utility_failure() => EXIT_UTILITY,
        _ => EXIT_CONFIG,
    }
}

/// Parse `args` (including the program name), run the command and return
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Value(a) => cmd_value(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::LimitCheck(a) => cmd_limit_check(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
