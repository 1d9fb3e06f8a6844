//! Command-line surface: argument parsing, configuration merging, and file
//! emission for the four subcommands (`rank`, `importance`, `benchmark`,
//! `export-data`).
//!
//! Configuration precedence is CLI flag > JSON config file (`--config`) >
//! built-in default, resolved field by field into one [`RunConfig`]. Worker
//! threads come from `--threads`, then the `AFE_THREADS` environment
//! variable, then all cores; thread count never changes any emitted byte.
//!
//! Exit codes: `0` success, `1` configuration error (single-line
//! diagnostic), `2` pipeline failure (message names the failing stage). The
//! entry point catches panics, so no run aborts the shell.

use crate::afe::{importance_vectors, run_afe, AfeConfig, AfeError};
use crate::bench::{figure_csvs, run_benchmark, table_csv, BenchError, ALGORITHMS, SUITES};
use crate::data::{export_csv, load_csv, DataError, DataMatrix, Schema};
use crate::importance::GaConfig;
use crate::models::{ClassifierSpec, Kind};
use crate::report::{ranking_csv, write_text, Envelope, ReportError, ReportKind};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Which subcommand a [`RunConfig`] drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Rank,
    Importance,
    Benchmark,
    ExportData,
}

/// Fully resolved invocation: every default filled, precedence applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub data: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub suite: Option<String>,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub limit: Option<usize>,
    pub covid_full: bool,
    pub afe: AfeConfig,
}

/// CLI failure, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: bad flags, missing files, invalid config.
    Config(String),
    /// Exit 2: a pipeline stage failed.
    Pipeline { stage: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Pipeline { .. } => 2,
        }
    }

    fn at(stage: &str, message: impl std::fmt::Display) -> Self {
        CliError::Pipeline {
            stage: stage.to_string(),
            message: message.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Pipeline { stage, message } => {
                write!(f, "pipeline error at stage {stage}: {message}")
            }
        }
    }
}

impl From<AfeError> for CliError {
    fn from(e: AfeError) -> Self {
        match e {
            AfeError::Stage { stage, source } => CliError::at(stage, source),
            other => CliError::at("validate", other),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::UnknownSuite(_) => CliError::Config(e.to_string()),
            BenchError::Data(d) => CliError::at("load", d),
            BenchError::Afe(a) => a.into(),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::at("write", e)
    }
}

fn parse_model(s: &str) -> Result<Kind, String> {
    Kind::from_str(s)
}

#[derive(Parser, Debug)]
#[command(
    name = "afe",
    version,
    about = "Adaptive feature evaluation: permutation, Shapley, and genetic importance fused into one ranking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full evaluator and emit the fused feature ranking
    Rank(RankArgs),
    /// Emit the three engine importance vectors without fusion
    Importance(RankArgs),
    /// Run every classifier x method cell on a bundled suite
    Benchmark(BenchmarkArgs),
    /// Re-emit a loaded dataset as an encoded CSV plus schema
    ExportData(ExportArgs),
}

#[derive(Args, Debug, Clone)]
struct DataArgs {
    /// CSV dataset path
    #[arg(long, value_name = "FILE")]
    data: PathBuf,
    /// JSON schema mapping each column to its role
    #[arg(long, value_name = "FILE")]
    schema: PathBuf,
}

#[derive(Args, Debug, Clone, Default)]
struct TuningArgs {
    /// Classifier family
    #[arg(long, value_parser = parse_model, value_name = "lr|dt|gnb|rf|mlp|gb")]
    model: Option<Kind>,
    /// Master seed every stochastic stage derives from
    #[arg(long)]
    seed: Option<u64>,
    /// JSON config file; CLI flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker thread cap (falls back to env AFE_THREADS, then all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Background rows marginalized over in Shapley attribution
    #[arg(long)]
    background_size: Option<usize>,
    /// Shuffle repeats per feature in permutation importance
    #[arg(long)]
    pfi_repeats: Option<usize>,
    /// Genetic search population size
    #[arg(long = "ga-pop")]
    ga_pop: Option<usize>,
    /// Genetic search elite count
    #[arg(long = "ga-elite")]
    ga_elite: Option<usize>,
    /// Genetic search crossover probability
    #[arg(long = "ga-pc")]
    ga_pc: Option<f64>,
    /// Genetic search per-bit mutation probability
    #[arg(long = "ga-pm")]
    ga_pm: Option<f64>,
    /// Genetic search generation count
    #[arg(long = "ga-iters")]
    ga_iters: Option<usize>,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Report JSON path (the ranking CSV lands next to it)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    /// Bundled suite to run
    #[arg(long, value_name = "lung|heart|covid|synth")]
    suite: String,
    /// Use the full-scale covid variant instead of the 10k subsample
    #[arg(long)]
    covid_full: bool,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Table JSON path (CSV and per-figure files land next to it)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Keep only the first N rows (0 writes the header only)
    #[arg(long)]
    limit: Option<usize>,
    /// Output CSV path (an all-numeric schema lands next to it)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Accepted for interface symmetry; export is single-threaded
    #[arg(long)]
    threads: Option<usize>,
}

/// Partial evaluator settings from `--config`; every field optional so the
/// file only pins what it mentions.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    classifier: Option<ClassifierSpec>,
    seed: Option<u64>,
    split_ratio: Option<f64>,
    pfi_repeats: Option<usize>,
    background_size: Option<usize>,
    shap_sample_cap: Option<usize>,
    ga: Option<GaConfig>,
    ga_binary_importance: Option<bool>,
}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!("invalid config file {}: {e}", path.display()))
        })
    }
}

/// Field-by-field precedence: CLI flag, else config file, else default.
fn resolve_afe(tuning: &TuningArgs, file: &ConfigFile) -> AfeConfig {
    let seed = tuning.seed.or(file.seed).unwrap_or(0);
    let classifier = match (tuning.model, &file.classifier) {
        (Some(kind), _) => ClassifierSpec::with_defaults(kind, seed),
        (None, Some(spec)) => spec.clone(),
        (None, None) => ClassifierSpec::with_defaults(Kind::Rf, seed),
    };
    let defaults = AfeConfig::new(Kind::Rf, 0);
    let mut ga = file.ga.clone().unwrap_or(defaults.ga);
    if let Some(v) = tuning.ga_pop {
        ga.population = v;
    }
    if let Some(v) = tuning.ga_elite {
        ga.elite = v;
    }
    if let Some(v) = tuning.ga_pc {
        ga.crossover_rate = v;
    }
    if let Some(v) = tuning.ga_pm {
        ga.mutation_rate = v;
    }
    if let Some(v) = tuning.ga_iters {
        ga.max_iter = v;
    }
    AfeConfig {
        classifier,
        seed,
        split_ratio: file.split_ratio.unwrap_or(defaults.split_ratio),
        pfi_repeats: tuning
            .pfi_repeats
            .or(file.pfi_repeats)
            .unwrap_or(defaults.pfi_repeats),
        background_size: tuning
            .background_size
            .or(file.background_size)
            .unwrap_or(defaults.background_size),
        shap_sample_cap: file.shap_sample_cap.unwrap_or(defaults.shap_sample_cap),
        ga,
        ga_binary_importance: file
            .ga_binary_importance
            .unwrap_or(defaults.ga_binary_importance),
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        return Ok(Some(n));
    }
    match std::env::var("AFE_THREADS") {
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                CliError::Config(format!("AFE_THREADS must be a positive integer, got {raw:?}"))
            })?;
            if n == 0 {
                return Err(CliError::Config("AFE_THREADS must be positive".into()));
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{what} file {} does not exist",
            path.display()
        )))
    }
}

/// Merge one subcommand's arguments into a validated [`RunConfig`].
fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let (command, data, suite, out, limit, covid_full, tuning) = match cli.command {
        Command::Rank(a) => (
            CommandKind::Rank,
            Some(a.data),
            None,
            a.out.unwrap_or_else(|| PathBuf::from("afe_rank_report.json")),
            None,
            false,
            a.tuning,
        ),
        Command::Importance(a) => (
            CommandKind::Importance,
            Some(a.data),
            None,
            a.out
                .unwrap_or_else(|| PathBuf::from("afe_importance_report.json")),
            None,
            false,
            a.tuning,
        ),
        Command::Benchmark(a) => (
            CommandKind::Benchmark,
            None,
            Some(a.suite.clone()),
            a.out
                .unwrap_or_else(|| PathBuf::from(format!("afe_benchmark_{}.json", a.suite))),
            None,
            a.covid_full,
            a.tuning,
        ),
        Command::ExportData(a) => (
            CommandKind::ExportData,
            Some(a.data),
            None,
            a.out.unwrap_or_else(|| PathBuf::from("afe_export.csv")),
            a.limit,
            false,
            TuningArgs {
                threads: a.threads,
                ..TuningArgs::default()
            },
        ),
    };

    let file = match &tuning.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let threads = resolve_threads(tuning.threads)?;
    let afe = resolve_afe(&tuning, &file);

    let (data_path, schema_path) = match data {
        Some(d) => (Some(d.data), Some(d.schema)),
        None => (None, None),
    };
    let cfg = RunConfig {
        command,
        data: data_path,
        schema: schema_path,
        suite,
        out,
        threads,
        limit,
        covid_full,
        afe,
    };
    validate(&cfg)?;
    Ok(cfg)
}

/// The RunConfig invariant: referenced paths exist now, suite names are
/// known. Everything else was range-checked during merging.
fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(data) = &cfg.data {
        require_file(data, "data")?;
    }
    if let Some(schema) = &cfg.schema {
        require_file(schema, "schema")?;
    }
    if let Some(suite) = &cfg.suite {
        if !SUITES.contains(&suite.as_str()) {
            return Err(CliError::Config(format!(
                "unknown suite {suite:?} (expected lung|heart|covid|synth)"
            )));
        }
    }
    Ok(())
}

fn load_data(cfg: &RunConfig) -> Result<DataMatrix, CliError> {
    let data_path = cfg.data.as_ref().expect("command requires --data");
    let schema_path = cfg.schema.as_ref().expect("command requires --schema");
    let schema = Schema::load(schema_path).map_err(|e| CliError::at("load", e))?;
    load_csv(data_path, &schema).map_err(|e| CliError::at("load", e))
}

fn configure_thread_pool(threads: Option<usize>) {
    if let Some(n) = threads {
        // Ignore the error when a pool already exists (repeat calls within
        // one process); the first configuration wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn cmd_rank(cfg: &RunConfig) -> Result<(), CliError> {
    let data = load_data(cfg)?;
    let report = run_afe(&cfg.afe, &data)?;

    Envelope::new(ReportKind::Rank, &report).write(&cfg.out)?;
    let csv_path = cfg.out.with_extension("csv");
    write_text(&csv_path, &ranking_csv(&report.ranking_rows())?)?;

    println!(
        "fused ranking ({} with {} features, seed {}):",
        cfg.afe.classifier.kind().label(),
        data.n_features(),
        cfg.afe.seed
    );
    println!("{:<4} {:<28} {}", "rank", "feature", "weight");
    for (idx, (feature, weight)) in report.ranking_rows().iter().enumerate() {
        println!("{:<4} {:<28} {:.6}", idx + 1, feature, weight);
    }
    println!(
        "selected {} features: {:?}",
        report.afe_selected_features.len(),
        report.afe_selected_features
    );
    println!(
        "baseline accuracy {:.4} -> AFE accuracy {:.4}",
        report.baseline_metrics.accuracy, report.afe_metrics.accuracy
    );
    println!("wrote {} and {}", cfg.out.display(), csv_path.display());
    Ok(())
}

fn cmd_importance(cfg: &RunConfig) -> Result<(), CliError> {
    let data = load_data(cfg)?;
    let bundle = importance_vectors(&cfg.afe, &data)?;

    Envelope::new(ReportKind::Importance, &bundle).write(&cfg.out)?;

    println!(
        "engine importance ({} with {} features, seed {}):",
        cfg.afe.classifier.kind().label(),
        data.n_features(),
        cfg.afe.seed
    );
    println!("{:<28} {:>10} {:>10} {:>10}", "feature", "PCT", "SHAP", "GA");
    for (j, name) in bundle.vectors[0].feature_names.iter().enumerate() {
        println!(
            "{:<28} {:>10.6} {:>10.6} {:>10.6}",
            name, bundle.vectors[0].scores[j], bundle.vectors[1].scores[j], bundle.vectors[2].scores[j]
        );
    }
    println!("wrote {}", cfg.out.display());
    Ok(())
}

fn cmd_benchmark(cfg: &RunConfig) -> Result<(), CliError> {
    let suite = cfg.suite.as_ref().expect("benchmark requires --suite");
    let table = run_benchmark(suite, &cfg.afe, cfg.covid_full)?;

    Envelope::new(ReportKind::Benchmark, &table).write(&cfg.out)?;
    let csv_path = cfg.out.with_extension("csv");
    write_text(&csv_path, &table_csv(&table))?;
    let mut written = vec![cfg.out.display().to_string(), csv_path.display().to_string()];
    for (stem, text) in figure_csvs(&table) {
        let figure_path = cfg.out.with_extension(format!("{stem}.csv"));
        write_text(&figure_path, &text)?;
        written.push(figure_path.display().to_string());
    }

    println!("benchmark suite {suite} (seed {}):", cfg.afe.seed);
    println!(
        "{:<22} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "algorithm", "baseline", "PCT", "XAI", "GA", "AFE"
    );
    for kind in ALGORITHMS {
        let acc: Vec<String> = crate::bench::METHODS
            .iter()
            .map(|&m| {
                let cell = table.cell(kind, m).expect("complete grid");
                format!("{:>9.4}", cell.accuracy)
            })
            .collect();
        println!("{:<22} {}", kind.label(), acc.join(" "));
    }
    println!("wrote {}", written.join(", "));
    Ok(())
}

fn cmd_export_data(cfg: &RunConfig) -> Result<(), CliError> {
    let data = load_data(cfg)?;
    export_csv(&data, &cfg.out, cfg.limit).map_err(|e: DataError| CliError::at("write", e))?;
    let schema_path = cfg.out.with_extension("schema.json");
    let schema = Schema::all_numeric(data.feature_names(), data.label_name());
    schema
        .save(&schema_path)
        .map_err(|e| CliError::at("write", e))?;

    let rows = cfg.limit.unwrap_or(data.n_rows()).min(data.n_rows());
    println!(
        "wrote {rows} of {} rows to {} (schema: {})",
        data.n_rows(),
        cfg.out.display(),
        schema_path.display()
    );
    Ok(())
}

fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    configure_thread_pool(cfg.threads);
    match cfg.command {
        CommandKind::Rank => cmd_rank(cfg),
        CommandKind::Importance => cmd_importance(cfg),
        CommandKind::Benchmark => cmd_benchmark(cfg),
        CommandKind::ExportData => cmd_export_data(cfg),
    }
}

/// Parse, resolve, run; returns the process exit code and never panics.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive as "errors" with exit 0;
            // real usage mistakes are configuration errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        let cfg = resolve(cli)?;
        execute(&cfg)
    }));
    match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("{e}");
            e.exit_code()
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic payload".to_string());
            eprintln!("pipeline error at stage internal: {message}");
            2
        }
    }
}
