//! `tweetcast` command line: subcommands, `--config` merging and the exit-code
//! contract (0 success, 1 usage, 2 data error).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Deserialize;

use crate::census::{read_priors, validate_profiles, CensusPaths, Party};
use crate::corpus::{
    bucket_by_day, ingest_tweets, write_daily_csv, BothPolicy, BucketOptions, Candidate,
    CandidateSpec, Candidates,
};
use crate::eval::{compare, read_shares, ComparisonTable, StateShares};
use crate::lexicon::{Lexicon, ScoreMode};
use crate::model::{
    forecast, Forecast, ForecastModel, PartyAlignment, SupportStrategy, TwitterSupport, WeightMode,
};
use crate::pipeline::{run_pipeline, PipelineOptions};
use crate::report::{render_timeseries_svg, write_forecast_csv};
use crate::synth::{generate_corpus, SynthSpec};

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (fixture set us2012-v1)");

const DEFAULT_SWING_STATES: [&str; 4] = ["Colorado", "Florida", "Iowa", "Ohio"];

#[derive(Debug, Parser)]
#[command(name = "tweetcast", version = VERSION, about = "Census-corrected Twitter election forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forecast state shares, popular vote and electoral college.
    Forecast(ForecastArgs),
    /// Score predicted shares against actual results and a baseline.
    Evaluate(EvaluateArgs),
    /// Daily positive/negative sentiment per candidate.
    Timeseries(TimeseriesArgs),
    /// Generate a synthetic tweet corpus with planted support.
    Synth(SynthArgs),
    /// Check the per-state input files.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct TweetArgs {
    /// Tweets as JSON Lines.
    #[arg(long)]
    tweets: Option<PathBuf>,
    /// AFINN lexicon file; the bundled AFINN-111 list when omitted.
    #[arg(long)]
    afinn: Option<PathBuf>,
    /// Keep tweets in every language.
    #[arg(long)]
    all_languages: bool,
    /// Abort on the first unparseable tweet.
    #[arg(long)]
    strict: bool,
    /// Match multi-word lexicon entries.
    #[arg(long)]
    phrases: bool,
    /// Ignore tweets that mention both candidates.
    #[arg(long)]
    drop_both: bool,
    /// Worker threads for parsing and scoring (default 1).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct StateArgs {
    /// `state,twitter_frac,internet_not_twitter_frac`
    #[arg(long)]
    census: Option<PathBuf>,
    /// `state,dem_share,rep_share`
    #[arg(long)]
    priors: Option<PathBuf>,
    /// `state,electoral_votes`
    #[arg(long)]
    apportionment: Option<PathBuf>,
    /// Turnout weights; equal weights when omitted.
    #[arg(long)]
    turnout: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ForecastArgs {
    /// JSON file of defaults; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    tweets: TweetArgs,
    #[command(flatten)]
    states: StateArgs,
    /// Use this twitter support for candidate 1 instead of estimating it from tweets.
    #[arg(long)]
    e1: Option<f64>,
    /// 1, 2 or baseline.
    #[arg(long)]
    model: Option<String>,
    /// Segment weights: literal or normalized.
    #[arg(long)]
    weights: Option<String>,
    /// positive-share, net-share or volume-share.
    #[arg(long)]
    strategy: Option<String>,
    /// Plain shares instead of add-one smoothing.
    #[arg(long)]
    no_smoothing: bool,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// json or csv; inferred from the output extension when omitted.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comparison table with predicted, actual and baseline columns.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Forecast JSON or `state,share` CSV.
    #[arg(long)]
    predicted: Option<PathBuf>,
    /// `state,share` CSV of actual two-party shares for candidate 1.
    #[arg(long)]
    actual: Option<PathBuf>,
    /// Baseline forecast JSON or `state,share` CSV.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Priors CSV to use as the baseline.
    #[arg(long)]
    priors: Option<PathBuf>,
    /// Comma-separated states for the swing-state section.
    #[arg(long, value_delimiter = ',')]
    swing: Option<Vec<String>>,
    /// Write the full per-state report here (json or csv).
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct TimeseriesArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    tweets: TweetArgs,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write a line chart here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Synth spec JSON.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    afinn: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_tweets: Option<u64>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    states: StateArgs,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct CandidateConfig {
    name: String,
    terms: Vec<String>,
    party: Party,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    tweets: Option<PathBuf>,
    afinn: Option<PathBuf>,
    census: Option<PathBuf>,
    priors: Option<PathBuf>,
    apportionment: Option<PathBuf>,
    turnout: Option<PathBuf>,
    table: Option<PathBuf>,
    predicted: Option<PathBuf>,
    actual: Option<PathBuf>,
    baseline: Option<PathBuf>,
    spec: Option<PathBuf>,
    output: Option<PathBuf>,
    svg: Option<PathBuf>,
    format: Option<String>,
    model: Option<serde_json::Value>,
    weights: Option<String>,
    strategy: Option<String>,
    smoothing: Option<bool>,
    english_only: Option<bool>,
    strict: Option<bool>,
    phrases: Option<bool>,
    drop_both: Option<bool>,
    threads: Option<usize>,
    seed: Option<u64>,
    n_tweets: Option<u64>,
    e1: Option<f64>,
    candidates: Option<Vec<CandidateConfig>>,
    swing_states: Option<Vec<String>>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

macro_rules! data_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Data(e.to_string())
            }
        })*
    };
}
data_error!(
    crate::lexicon::LexiconError,
    crate::corpus::IngestError,
    crate::census::CensusError,
    crate::model::ModelError,
    crate::eval::EvalError,
    std::io::Error,
    csv::Error,
    serde_json::Error
);

type CliResult<T = ()> = Result<T, CliError>;

fn usage_for(sub: &str) -> String {
    let mut cmd = Cli::command();
    match cmd.find_subcommand_mut(sub) {
        Some(s) => s.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

fn require<T>(value: Option<T>, flag: &str, sub: &str) -> CliResult<T> {
    value.ok_or_else(|| {
        CliError::Usage(format!(
            "missing --{flag} (or `{}` in --config)\n\n{}",
            flag.replace('-', "_"),
            usage_for(sub)
        ))
    })
}

fn load_config(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn open_reader(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))
}

fn lexicon(path: Option<&Path>) -> CliResult<Lexicon> {
    match path {
        Some(p) => {
            Lexicon::from_path(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
        }
        None => Ok(Lexicon::afinn111()),
    }
}

fn candidates(cfg: &FileConfig) -> CliResult<(Candidates, PartyAlignment)> {
    let Some(list) = &cfg.candidates else {
        return Ok((Candidates::us2012(), PartyAlignment::default()));
    };
    let [a, b] = list.as_slice() else {
        return Err(CliError::Usage(format!(
            "config must list exactly 2 candidates, got {}",
            list.len()
        )));
    };
    let spec = |c: &CandidateConfig| CandidateSpec {
        name: c.name.clone(),
        match_terms: c.terms.clone(),
    };
    let cands = Candidates::new(spec(a), spec(b)).map_err(|e| CliError::Usage(e.to_string()))?;
    let align =
        PartyAlignment::new(a.party, b.party).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((cands, align))
}

fn threads(flag: Option<usize>, cfg: &FileConfig) -> CliResult<usize> {
    match flag.or(cfg.threads).unwrap_or(1) {
        0 => Err(CliError::Usage("--threads must be at least 1".into())),
        n => Ok(n),
    }
}

fn pipeline_options(t: &TweetArgs, cfg: &FileConfig) -> CliResult<PipelineOptions> {
    let threads = threads(t.threads, cfg)?;
    let mut opts = PipelineOptions::default().with_threads(threads);
    opts.ingest.english_only = !t.all_languages && cfg.english_only.unwrap_or(true);
    opts.ingest.strict = t.strict || cfg.strict.unwrap_or(false);
    if t.phrases || cfg.phrases.unwrap_or(false) {
        opts.bucket.mode = ScoreMode::Phrase;
    }
    if t.drop_both || cfg.drop_both.unwrap_or(false) {
        opts.bucket.both = BothPolicy::DropBoth;
    }
    Ok(opts)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn format(flag: Option<String>, cfg: Option<String>, output: Option<&Path>) -> CliResult<Format> {
    match flag.or(cfg).as_deref() {
        Some("json") => Ok(Format::Json),
        Some("csv") => Ok(Format::Csv),
        Some(other) => Err(CliError::Usage(format!(
            "invalid format `{other}` (valid: json, csv)"
        ))),
        None if output.and_then(Path::extension).is_some_and(|e| e == "csv") => Ok(Format::Csv),
        None => Ok(Format::Json),
    }
}

fn emit(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(bytes).map_err(CliError::from),
    }
}

fn json_bytes<T: serde::Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn run_forecast(args: ForecastArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    let model_str = args.model.or_else(|| {
        cfg.model.as_ref().map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
    });
    let model: ForecastModel = model_str
        .as_deref()
        .unwrap_or("2")
        .parse()
        .map_err(CliError::Usage)?;
    let mode: WeightMode = args
        .weights
        .or(cfg.weights.clone())
        .as_deref()
        .unwrap_or("normalized")
        .parse()
        .map_err(CliError::Usage)?;
    let strategy: SupportStrategy = args
        .strategy
        .or(cfg.strategy.clone())
        .as_deref()
        .unwrap_or("positive-share")
        .parse()
        .map_err(CliError::Usage)?;
    let census = require(
        args.states.census.or(cfg.census.clone()),
        "census",
        "forecast",
    )?;
    let priors = require(
        args.states.priors.or(cfg.priors.clone()),
        "priors",
        "forecast",
    )?;
    let apportionment = require(
        args.states.apportionment.or(cfg.apportionment.clone()),
        "apportionment",
        "forecast",
    )?;
    let turnout = args.states.turnout.or(cfg.turnout.clone());
    let output = args.output.or(cfg.output.clone());
    let fmt = format(args.format, cfg.format.clone(), output.as_deref())?;
    let (cands, alignment) = candidates(&cfg)?;

    let support = match (args.e1.or(cfg.e1), model) {
        (_, ForecastModel::Baseline) => TwitterSupport::fixed(0.5)?,
        (Some(e1), _) => TwitterSupport::fixed(e1).map_err(|e| CliError::Usage(e.to_string()))?,
        (None, _) => {
            let tweets_path = require(
                args.tweets.tweets.clone().or(cfg.tweets.clone()),
                "tweets",
                "forecast",
            )?;
            let mut opts = pipeline_options(&args.tweets, &cfg)?;
            opts.strategy = strategy;
            opts.smoothing = !args.no_smoothing && cfg.smoothing.unwrap_or(true);
            let lex = lexicon(args.tweets.afinn.as_deref().or(cfg.afinn.as_deref()))?;
            let result = run_pipeline(open_reader(&tweets_path)?, &lex, &cands, &opts)?;
            let _ = writeln!(err, "tweetcast: ingest {}", result.corpus.stats);
            result.support
        }
    };
    let _ = writeln!(
        err,
        "tweetcast: twitter support E = ({:.6}, {:.6})",
        support.e[0], support.e[1]
    );

    let paths = CensusPaths {
        census: &census,
        priors: &priors,
        apportionment: &apportionment,
        weights: turnout.as_deref(),
    };
    let table = paths.load()?;
    let result = forecast(&table, &support, &alignment, model, mode)?;
    let bytes = match fmt {
        Format::Json => json_bytes(&result)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_forecast_csv(&result, cands.names(), &mut buf)?;
            buf
        }
    };
    emit(output.as_deref(), &bytes, out)
}

fn load_shares(path: &Path) -> CliResult<StateShares> {
    if path.extension().is_some_and(|e| e == "json") {
        let f: Forecast = serde_json::from_reader(open_reader(path)?)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        Ok(f.two_party_shares()?)
    } else {
        Ok(read_shares(
            &path.display().to_string(),
            open_reader(path)?,
        )?)
    }
}

fn run_evaluate(args: EvaluateArgs, out: &mut dyn Write) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    let table = args.table.or(cfg.table.clone());
    let predicted = args.predicted.or(cfg.predicted.clone());
    let actual = args.actual.or(cfg.actual.clone());
    let baseline = args.baseline.or(cfg.baseline.clone());
    let priors = args.priors.or(cfg.priors.clone());
    let output = args.output.or(cfg.output.clone());
    let fmt = format(args.format, cfg.format.clone(), output.as_deref())?;
    let (_, alignment) = candidates(&cfg)?;

    let (model, base, act) = if let Some(table) = table {
        if predicted.is_some() || actual.is_some() || baseline.is_some() {
            return Err(CliError::Usage(
                "--table cannot be combined with --predicted/--actual/--baseline".into(),
            ));
        }
        let t = ComparisonTable::from_csv(&table.display().to_string(), open_reader(&table)?)?;
        (t.predicted(), t.baseline(), t.actual())
    } else {
        let predicted = require(predicted, "predicted", "evaluate")?;
        let actual = require(actual, "actual", "evaluate")?;
        let base = match (baseline, priors) {
            (Some(b), _) => load_shares(&b)?,
            (None, Some(p)) => {
                let party = alignment.party(Candidate::First).index();
                read_priors(open_reader(&p)?)?
                    .into_iter()
                    .map(|(k, v)| (k, v[party] / (v[0] + v[1])))
                    .collect::<StateShares>()
            }
            (None, None) => require(None, "baseline", "evaluate")?,
        };
        (load_shares(&predicted)?, base, load_shares(&actual)?)
    };

    let swing: Vec<String> = match args.swing.or(cfg.swing_states.clone()) {
        Some(list) => list,
        None => DEFAULT_SWING_STATES
            .iter()
            .filter(|s| model.contains_key(**s))
            .map(|s| s.to_string())
            .collect(),
    };
    let report = compare(&model, &base, &act, &swing)?;
    if let Some(path) = output.as_deref() {
        let bytes = match fmt {
            Format::Json => json_bytes(&report)?,
            Format::Csv => {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                buf
            }
        };
        emit(Some(path), &bytes, out)?;
    }
    writeln!(out, "{}", report.summary_line())?;
    Ok(())
}

fn run_timeseries(args: TimeseriesArgs, out: &mut dyn Write) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    let tweets = require(
        args.tweets.tweets.clone().or(cfg.tweets.clone()),
        "tweets",
        "timeseries",
    )?;
    let opts = pipeline_options(&args.tweets, &cfg)?;
    let (cands, _) = candidates(&cfg)?;
    let lex = lexicon(args.tweets.afinn.as_deref().or(cfg.afinn.as_deref()))?;
    let output = args.output.or(cfg.output.clone());
    let svg = args.svg.or(cfg.svg.clone());

    let corpus = ingest_tweets(open_reader(&tweets)?, &cands, &opts.ingest)?;
    let rows = bucket_by_day(&corpus, &lex, &BucketOptions { ..opts.bucket })?;
    let mut buf = Vec::new();
    write_daily_csv(&rows, &mut buf)?;
    emit(output.as_deref(), &buf, out)?;
    if let Some(path) = svg {
        let chart = render_timeseries_svg(&rows, cands.names());
        std::fs::write(&path, chart)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_synth(args: SynthArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    let spec_path = require(args.spec.or(cfg.spec.clone()), "spec", "synth")?;
    let text = std::fs::read_to_string(&spec_path)
        .map_err(|e| CliError::Usage(format!("cannot read spec {}: {e}", spec_path.display())))?;
    let mut spec: SynthSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid spec {}: {e}", spec_path.display())))?;
    if let Some(seed) = args.seed.or(cfg.seed) {
        spec.seed = seed;
    }
    if let Some(n) = args.n_tweets.or(cfg.n_tweets) {
        spec.n_tweets = n;
    }
    let lex = lexicon(args.afinn.as_deref().or(cfg.afinn.as_deref()))?;
    let corpus = generate_corpus(&spec, &lex).map_err(|e| CliError::Usage(e.to_string()))?;
    let meta = serde_json::to_string(&corpus.metadata)?;
    match args.output.or(cfg.output.clone()) {
        Some(path) => {
            emit(Some(&path), corpus.jsonl.as_bytes(), out)?;
            writeln!(out, "{meta}")?;
        }
        None => {
            out.write_all(corpus.jsonl.as_bytes())?;
            let _ = writeln!(err, "{meta}");
        }
    }
    Ok(())
}

fn run_validate(args: ValidateArgs, out: &mut dyn Write) -> CliResult {
    let cfg = load_config(args.config.as_deref())?;
    let census = require(
        args.states.census.or(cfg.census.clone()),
        "census",
        "validate",
    )?;
    let priors = require(
        args.states.priors.or(cfg.priors.clone()),
        "priors",
        "validate",
    )?;
    let apportionment = require(
        args.states.apportionment.or(cfg.apportionment.clone()),
        "apportionment",
        "validate",
    )?;
    let turnout = args.states.turnout.or(cfg.turnout.clone());
    let paths = CensusPaths {
        census: &census,
        priors: &priors,
        apportionment: &apportionment,
        weights: turnout.as_deref(),
    };
    let report = validate_profiles(&paths.read()?);
    emit(
        args.output.or(cfg.output.clone()).as_deref(),
        &json_bytes(&report)?,
        out,
    )?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Data(format!(
            "{} validation finding(s)",
            report.findings.len()
        )))
    }
}

/// Runs the CLI with explicit streams and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Forecast(a) => run_forecast(a, out, err),
        Command::Evaluate(a) => run_evaluate(a, out),
        Command::Timeseries(a) => run_timeseries(a, out),
        Command::Synth(a) => run_synth(a, out, err),
        Command::Validate(a) => run_validate(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Data(msg)) = &e;
            let _ = writeln!(err, "tweetcast: {msg}");
            e.code()
        }
    }
}
