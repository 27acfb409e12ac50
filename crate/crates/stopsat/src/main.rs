//! `stopsat` — expected-satisfaction evaluation for ranked retrieval runs.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use stopsat::config::{MetricConfig, SatisfactionModel, StoppingModel, UnjudgedPolicy};
use stopsat::errors::Error;
use stopsat::metric::expected_satisfaction;
use stopsat::oracles::{average_precision, rbp_direct};
use stopsat::ranking::JudgedRanking;
use stopsat::report::{format_score, EvaluationReport, TopicOutcome};
use stopsat::satisfaction::GainMap;
use stopsat::simulate::simulate;
use stopsat::stopping::WeParams;
use stopsat::trec::{join, parse_qrels, parse_run};

/// Largest framework-vs-oracle difference `compare` accepts.
const COMPARE_TOLERANCE: f64 = 1e-9;

/// Spreads per-topic seeds across the 64-bit space (Weyl increment).
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Parser)]
#[command(
    name = "stopsat",
    version,
    about = "Expected-satisfaction evaluation for ranked retrieval",
    long_about = "Scores retrieval runs with a user model that stops at each rank with a \
                  configurable hazard and realizes a configurable satisfaction. Average \
                  precision and rank-biased precision are exact instances.",
    after_help = "Exit codes: 0 success, 1 data or metric failure, 2 usage error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a run against qrels and print per-topic report rows.
    Evaluate(EvaluateArgs),
    /// Check framework scores against the closed-form AP or RBP oracle.
    Compare(CompareArgs),
    /// Simulate the browsing process and compare it with the closed form.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Emit JSON (scores at full precision, config echoed) instead of rows.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Monte Carlo trials per topic.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Base RNG seed; each topic derives its own deterministic stream.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct CommonArgs {
    /// Relevance judgments, `topic iter doc grade` per line.
    #[arg(long, value_name = "PATH")]
    qrels: PathBuf,
    /// System run, `topic iter doc rank score tag` per line.
    #[arg(long, value_name = "PATH")]
    run: PathBuf,
    /// TOML file holding the same keys as the model flags; flags win.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Stopping model.
    #[arg(long, value_enum)]
    stopping: Option<StoppingKind>,
    /// Satisfaction model.
    #[arg(long, value_enum)]
    satisfaction: Option<SatisfactionKind>,
    /// RBP persistence (continuation probability), in [0, 1).
    #[arg(long, value_name = "F")]
    persistence: Option<f64>,
    /// WE base hazard, in [0, 1].
    #[arg(long, value_name = "F")]
    base_hazard: Option<f64>,
    /// WE expectation smoothing, in [0, 1].
    #[arg(long, value_name = "F")]
    alpha: Option<f64>,
    /// WE willingness exponent, >= 0.
    #[arg(long, value_name = "F")]
    gamma: Option<f64>,
    /// WE expectation exponent, >= 0.
    #[arg(long, value_name = "F")]
    delta: Option<f64>,
    /// WE initial expectation, in [0, 1].
    #[arg(long, value_name = "F")]
    prior: Option<f64>,
    /// Grade-to-gain table as GRADE:GAIN pairs, e.g. `0:0,1:0.5,2:1`.
    /// Without it, gain satisfaction binarizes at the threshold.
    #[arg(long, value_name = "G:V,...")]
    gains: Option<String>,
    /// Grades at or above this count as relevant.
    #[arg(long, value_name = "N")]
    threshold: Option<u32>,
    /// Treatment of retrieved documents missing from the qrels.
    #[arg(long, value_enum)]
    unjudged: Option<UnjudgedKind>,
    /// Truncate rankings to this depth.
    #[arg(long, value_name = "N")]
    depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum StoppingKind {
    Ap,
    Rbp,
    We,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SatisfactionKind {
    Precision,
    Gain,
    Navigational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum UnjudgedKind {
    Nonrelevant,
    Exclude,
    Error,
}

/// The model keys a TOML config file may set; mirrors the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    stopping: Option<StoppingKind>,
    satisfaction: Option<SatisfactionKind>,
    persistence: Option<f64>,
    base_hazard: Option<f64>,
    alpha: Option<f64>,
    gamma: Option<f64>,
    delta: Option<f64>,
    prior: Option<f64>,
    gains: Option<String>,
    threshold: Option<u32>,
    unjudged: Option<UnjudgedKind>,
    depth: Option<usize>,
}

/// Fully resolved model settings: defaults, overlaid by the config file,
/// overlaid by explicit flags.
struct ModelSettings {
    stopping: StoppingKind,
    satisfaction: SatisfactionKind,
    persistence: f64,
    base_hazard: f64,
    alpha: f64,
    gamma: f64,
    delta: f64,
    prior: f64,
    gains: Option<String>,
    threshold: u32,
    unjudged: UnjudgedKind,
    depth: Option<usize>,
}

impl Default for ModelSettings {
    fn default() -> Self {
        ModelSettings {
            stopping: StoppingKind::Ap,
            satisfaction: SatisfactionKind::Precision,
            persistence: 0.8,
            base_hazard: 0.2,
            alpha: 0.5,
            gamma: 1.0,
            delta: 1.0,
            prior: 0.5,
            gains: None,
            threshold: 1,
            unjudged: UnjudgedKind::Nonrelevant,
            depth: None,
        }
    }
}

enum RunError {
    /// Bad invocation: malformed flags, config file, or parameter ranges.
    Usage(String),
    /// The data or the metric failed.
    Failed(Error),
}

impl From<Error> for RunError {
    fn from(err: Error) -> Self {
        RunError::Failed(err)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(code) => code,
        Err(RunError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(RunError::Failed(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

impl ModelSettings {
    fn resolve(common: &CommonArgs) -> Result<Self, RunError> {
        let mut settings = ModelSettings::default();
        if let Some(path) = &common.config {
            settings.apply_file(load_file_config(path)?);
        }
        settings.apply_flags(common);
        Ok(settings)
    }

    fn apply_file(&mut self, file: FileConfig) {
        apply(&mut self.stopping, file.stopping);
        apply(&mut self.satisfaction, file.satisfaction);
        apply(&mut self.persistence, file.persistence);
        apply(&mut self.base_hazard, file.base_hazard);
        apply(&mut self.alpha, file.alpha);
        apply(&mut self.gamma, file.gamma);
        apply(&mut self.delta, file.delta);
        apply(&mut self.prior, file.prior);
        apply_opt(&mut self.gains, file.gains);
        apply(&mut self.threshold, file.threshold);
        apply(&mut self.unjudged, file.unjudged);
        apply_opt(&mut self.depth, file.depth);
    }

    fn apply_flags(&mut self, common: &CommonArgs) {
        apply(&mut self.stopping, common.stopping);
        apply(&mut self.satisfaction, common.satisfaction);
        apply(&mut self.persistence, common.persistence);
        apply(&mut self.base_hazard, common.base_hazard);
        apply(&mut self.alpha, common.alpha);
        apply(&mut self.gamma, common.gamma);
        apply(&mut self.delta, common.delta);
        apply(&mut self.prior, common.prior);
        apply_opt(&mut self.gains, common.gains.clone());
        apply(&mut self.threshold, common.threshold);
        apply(&mut self.unjudged, common.unjudged);
        apply_opt(&mut self.depth, common.depth);
    }

    fn to_config(&self) -> Result<MetricConfig, RunError> {
        let stopping = match self.stopping {
            StoppingKind::Ap => StoppingModel::Ap,
            StoppingKind::Rbp => StoppingModel::Rbp {
                persistence: self.persistence,
            },
            StoppingKind::We => StoppingModel::We(WeParams {
                base_hazard: self.base_hazard,
                expectation_smoothing: self.alpha,
                expectation_prior: self.prior,
                willingness_exponent: self.gamma,
                expectation_exponent: self.delta,
            }),
        };
        let satisfaction = match self.satisfaction {
            SatisfactionKind::Precision => SatisfactionModel::Precision,
            SatisfactionKind::Gain => {
                let gains = match &self.gains {
                    Some(text) => parse_gains(text)?,
                    None => GainMap::binary(self.threshold)
                        .map_err(|err| RunError::Usage(err.to_string()))?,
                };
                SatisfactionModel::Gain(gains)
            }
            SatisfactionKind::Navigational => SatisfactionModel::Navigational,
        };
        let cfg = MetricConfig {
            stopping,
            satisfaction,
            binarization_threshold: self.threshold,
            unjudged: match self.unjudged {
                UnjudgedKind::Nonrelevant => UnjudgedPolicy::Nonrelevant,
                UnjudgedKind::Exclude => UnjudgedPolicy::Exclude,
                UnjudgedKind::Error => UnjudgedPolicy::Error,
            },
            max_depth: self.depth,
        };
        cfg.validate()
            .map_err(|err| RunError::Usage(err.to_string()))?;
        Ok(cfg)
    }
}

/// Overwrites `slot` when the override is present.
fn apply<T>(slot: &mut T, value: Option<T>) {
    if let Some(value) = value {
        *slot = value;
    }
}

/// Same, for slots that are optional themselves.
fn apply_opt<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn load_file_config(path: &Path) -> Result<FileConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|err| {
        RunError::Failed(Error::Io(std::io::Error::new(
            err.kind(),
            format!("{}: {err}", path.display()),
        )))
    })?;
    toml::from_str(&text)
        .map_err(|err| RunError::Usage(format!("config file {}: {err}", path.display())))
}

/// Parses a `GRADE:GAIN,GRADE:GAIN,...` gain table string.
fn parse_gains(text: &str) -> Result<GainMap, RunError> {
    let mut entries = Vec::new();
    for part in text.split(',') {
        let (grade, gain) = part
            .split_once(':')
            .ok_or_else(|| RunError::Usage(format!("gain entry `{part}` is not GRADE:GAIN")))?;
        let grade: u32 = grade.trim().parse().map_err(|_| {
            RunError::Usage(format!(
                "gain grade `{grade}` is not a non-negative integer"
            ))
        })?;
        let gain: f64 = gain
            .trim()
            .parse()
            .map_err(|_| RunError::Usage(format!("gain value `{gain}` is not a number")))?;
        entries.push((grade, gain));
    }
    GainMap::table(entries).map_err(|err| RunError::Usage(err.to_string()))
}

fn open(path: &Path) -> Result<BufReader<File>, RunError> {
    File::open(path).map(BufReader::new).map_err(|err| {
        RunError::Failed(Error::Io(std::io::Error::new(
            err.kind(),
            format!("{}: {err}", path.display()),
        )))
    })
}

/// Parses both input files and joins them into per-topic rankings.
fn load_rankings(common: &CommonArgs, cfg: &MetricConfig) -> Result<Vec<JudgedRanking>, RunError> {
    let qrels = parse_qrels(open(&common.qrels)?).map_err(|err| annotate(err, &common.qrels))?;
    if qrels.clamped_negative() > 0 {
        eprintln!(
            "warning: {} negative grade(s) in {} clamped to 0",
            qrels.clamped_negative(),
            common.qrels.display()
        );
    }
    let run = parse_run(open(&common.run)?).map_err(|err| annotate(err, &common.run))?;
    Ok(join(&qrels, &run, cfg)?)
}

/// Prefixes parse errors with the file they came from.
fn annotate(err: Error, path: &Path) -> RunError {
    match err {
        Error::Parse { line, reason } => RunError::Failed(Error::Parse {
            line,
            reason: format!("{}: {reason}", path.display()),
        }),
        other => RunError::Failed(other),
    }
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<ExitCode, RunError> {
    let cfg = ModelSettings::resolve(&args.common)?.to_config()?;
    let rankings = load_rankings(&args.common, &cfg)?;
    let report = EvaluationReport::evaluate(&cfg, &rankings)?;
    for row in &report.rows {
        if let TopicOutcome::Undefined { reason } = &row.outcome {
            eprintln!("warning: topic {} undefined: {reason}", row.topic_id);
        }
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_tsv());
    }
    if report.defined_count() == 0 {
        eprintln!("error: the metric is undefined on every topic");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// The closed-form reference `compare` checks against.
enum Oracle {
    Ap,
    Rbp { persistence: f64, gains: GainMap },
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, RunError> {
    let cfg = ModelSettings::resolve(&args.common)?.to_config()?;
    let oracle = match (&cfg.stopping, &cfg.satisfaction) {
        (StoppingModel::Ap, SatisfactionModel::Precision) => Oracle::Ap,
        (StoppingModel::Rbp { persistence }, SatisfactionModel::Gain(gains)) => Oracle::Rbp {
            persistence: *persistence,
            gains: gains.clone(),
        },
        _ => {
            return Err(RunError::Usage(
                "compare needs a configuration with a closed-form reference: \
                 --stopping ap --satisfaction precision, or --stopping rbp --satisfaction gain"
                    .into(),
            ));
        }
    };
    let rankings = load_rankings(&args.common, &cfg)?;
    let mut max_delta: f64 = 0.0;
    let mut defined = 0usize;
    for ranking in &rankings {
        let framework = cfg.evaluate_ranking(ranking);
        let reference = match &oracle {
            Oracle::Ap => average_precision(ranking),
            Oracle::Rbp { persistence, gains } => {
                rbp_direct(ranking, *persistence, gains).map(|score| score.value)
            }
        };
        match (framework, reference) {
            (Ok(framework), Ok(reference)) => {
                let delta = (framework.expected_satisfaction - reference).abs();
                max_delta = max_delta.max(delta);
                defined += 1;
                println!(
                    "{}\t{}\t{}\t{:.3e}",
                    ranking.topic_id(),
                    format_score(framework.expected_satisfaction),
                    format_score(reference),
                    delta
                );
            }
            (Err(Error::UndefinedMetric { .. }), Err(Error::UndefinedMetric { .. })) => {
                println!("{}\tundefined\tundefined\tundefined", ranking.topic_id());
            }
            (Err(err), _) | (_, Err(err)) => return Err(err.into()),
        }
    }
    if defined == 0 {
        eprintln!("error: the metric is undefined on every topic");
        return Ok(ExitCode::from(1));
    }
    if max_delta > COMPARE_TOLERANCE {
        eprintln!(
            "error: max |framework - oracle| = {max_delta:.3e} exceeds {COMPARE_TOLERANCE:.0e}"
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, RunError> {
    let cfg = ModelSettings::resolve(&args.common)?.to_config()?;
    let rankings = load_rankings(&args.common, &cfg)?;
    let mut defined = 0usize;
    for (index, ranking) in rankings.iter().enumerate() {
        let topic_seed = args
            .seed
            .wrapping_add(SEED_STRIDE.wrapping_mul(index as u64 + 1));
        let schedules = cfg
            .hazards_for(ranking)
            .and_then(|hazards| Ok((hazards, cfg.satisfaction_for(ranking)?)));
        let (hazards, sats) = match schedules {
            Ok(pair) => pair,
            Err(Error::UndefinedMetric { reason, .. }) => {
                eprintln!("warning: topic {} undefined: {reason}", ranking.topic_id());
                println!(
                    "sim\t{}\t{}\tundefined\tundefined\tundefined\tn/a",
                    ranking.topic_id(),
                    args.trials
                );
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        let closed = expected_satisfaction(&hazards, &sats)?;
        let sim = simulate(&hazards, &sats, args.trials, topic_seed)?;
        defined += 1;
        let (stderr_s, agree_s) = match sim.std_error {
            Some(std_error) => {
                let agree =
                    (sim.mean_satisfaction - closed.expected_satisfaction).abs() <= 4.0 * std_error;
                (
                    format_score(std_error),
                    if agree { "true" } else { "false" },
                )
            }
            None => ("n/a".to_owned(), "n/a"),
        };
        println!(
            "sim\t{}\t{}\t{}\t{}\t{}\t{}",
            ranking.topic_id(),
            sim.trials,
            format_score(sim.mean_satisfaction),
            stderr_s,
            format_score(closed.expected_satisfaction),
            agree_s
        );
        for (rank0, count) in sim.stop_counts.iter().enumerate() {
            println!("hist\t{}\t{}\t{count}", ranking.topic_id(), rank0 + 1);
        }
        println!("hist\t{}\tnever\t{}", ranking.topic_id(), sim.never_stop);
    }
    if defined == 0 {
        eprintln!("error: the metric is undefined on every topic");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
