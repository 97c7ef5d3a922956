//! `aqml`: find, tune, report on and apply quantum ML models from CSV data.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or file error, 3 study
//! failure (no trial completed).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use aqml_core::data::{Dataset, TargetColumn};
use aqml_core::embed::{Registry, Task};
use aqml_core::exec::Exec;
use aqml_core::finder::{find_hyperparameters, find_model, FinderConfig, TunerConfig};
use aqml_core::models::FitOptions;
use aqml_core::qsim::CallCounter;
use aqml_core::store::{load_records, summarize, write_report, ModelSpecFile, StudyStore};
use aqml_core::train::BudgetLedger;
use aqml_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_STUDY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "aqml",
    version,
    about = "Automated quantum machine learning on a built-in simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search model families and architectures; write the best trained model.
    FindModel(FindModelArgs),
    /// Compare optimizers on the architecture of a saved model.
    Tune(TuneArgs),
    /// Export a study store as CSV and print the best trial.
    Report(ReportArgs),
    /// Apply a saved model to a CSV file.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TaskArg {
    Classification,
    Regression,
    Clustering,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Classification => Task::Classification,
            TaskArg::Regression => Task::Regression,
            TaskArg::Clustering => Task::Clustering,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Device {
    /// The embedded statevector simulator.
    Simulator,
}

#[derive(Debug, Args)]
struct Common {
    /// Worker threads; trials run concurrently.
    #[arg(long, default_value_t = 1)]
    cores: usize,
    /// Quantum backend.
    #[arg(long, value_enum, default_value_t = Device::Simulator)]
    device: Device,
}

#[derive(Debug, Args)]
struct FindModelArgs {
    #[arg(long, value_enum)]
    task: TaskArg,
    /// CSV with a header row and numeric columns.
    #[arg(long)]
    data: PathBuf,
    /// Target column; defaults to the last column. Ignored for clustering.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Training runs per trial, each with its own seed.
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long, default_value_t = 10)]
    epochs: usize,
    /// Score a trial must reach to count as feasible.
    #[arg(long, default_value_t = 0.8)]
    threshold: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "study.jsonl")]
    store: PathBuf,
    #[arg(long, default_value = "model.json")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct TuneArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Target column; defaults to the last column.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "tune.jsonl")]
    store: PathBuf,
    /// Also retrain with the winning optimizer and write the model here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, default_value = "study.jsonl")]
    store: PathBuf,
    #[arg(long, default_value = "report.csv")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::StudyFailed => EXIT_STUDY,
            Error::InvalidConfig(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    }
}

/// Parse `argv` (program name first) and run the command.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::FindModel(a) => run_find_model(a),
        Command::Tune(a) => run_tune(a),
        Command::Report(a) => run_report(a),
        Command::Predict(a) => run_predict(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn target_column(name: &Option<String>) -> TargetColumn<'_> {
    name.as_deref().map_or(TargetColumn::Last, TargetColumn::Named)
}

fn run_find_model(a: FindModelArgs) -> Result<(), Failure> {
    let task = Task::from(a.task);
    let target = if task.is_supervised() {
        target_column(&a.target)
    } else {
        if let Some(t) = &a.target {
            eprintln!("warning: --target {t} ignored for clustering");
        }
        TargetColumn::None
    };
    let data = Dataset::read_csv(&a.data, target)?;
    data.check_task(task)?;
    let mut config = FinderConfig::new(task);
    config.n_trials = a.trials;
    config.n_seeds = a.seeds;
    config.n_epochs = a.epochs;
    config.n_cores = a.common.cores;
    config.threshold = a.threshold;
    config.base_seed = a.seed;
    config.validate()?;
    let store = StudyStore::create(&a.store)?;
    let outcome = find_model(&config, &Registry::builtin(), &data, Some(&store))?;
    outcome.spec.save(&a.out)?;
    print!("{}", summarize(&outcome.records));
    if !outcome.selection.feasible {
        println!("warning: no trial reached threshold {}", a.threshold);
    }
    println!("model written to {}", a.out.display());
    Ok(())
}

fn run_tune(a: TuneArgs) -> Result<(), Failure> {
    let spec = ModelSpecFile::load(&a.model)?;
    let registry = Registry::builtin();
    let data = Dataset::read_csv(&a.data, target_column(&a.target))?;
    let data = data.select_features(&spec.feature_names)?;
    data.check_task(spec.task)?;
    let config = TunerConfig {
        n_trials: a.trials,
        n_seeds: a.seeds,
        n_cores: a.common.cores,
        base_seed: a.seed,
        exec: Exec::default(),
    };
    let outcome = find_hyperparameters(&spec, &registry, &data, &config)?;
    let store = StudyStore::create(&a.store)?;
    for r in &outcome.records {
        store.append(r)?;
    }
    let best = &outcome.records[outcome.best];
    println!(
        "best optimizer (trial {}): {} | mean_score {} | total_calls {}",
        best.trial_id,
        serde_json::to_string(&outcome.optimizer).map_err(Error::from)?,
        best.mean_score.unwrap_or(f64::NAN),
        best.total_calls
    );
    if let Some(out) = &a.out {
        let mut model = spec.to_model(&registry)?;
        let opts = FitOptions {
            optimizer: outcome.optimizer,
            seed: a.seed,
            exec: Exec::default(),
        };
        let ledger = BudgetLedger::new();
        let score = model.fit(&data, &opts, &ledger)?;
        let mut tuned = ModelSpecFile::from_model(
            &model,
            &spec.model_family,
            spec.feature_names.clone(),
            Some(outcome.optimizer),
            spec.metadata.clone(),
        );
        tuned.metadata.mean_score = score.or(tuned.metadata.mean_score);
        tuned.metadata.total_calls = ledger.total();
        tuned.metadata.base_seed = a.seed;
        tuned.save(out)?;
        println!("retrained model written to {}", out.display());
    }
    Ok(())
}

fn run_report(a: ReportArgs) -> Result<(), Failure> {
    let records = load_records(&a.store)?;
    let file = File::create(&a.out).map_err(|e| io_failure(&a.out, e))?;
    write_report(&records, BufWriter::new(file))?;
    if records.is_empty() {
        println!("warning: store {} holds no trials", a.store.display());
    }
    print!("{}", summarize(&records));
    Ok(())
}

fn run_predict(a: PredictArgs) -> Result<(), Failure> {
    let spec = ModelSpecFile::load(&a.model)?;
    let model = spec.to_model(&Registry::builtin())?;
    let data = Dataset::read_csv(&a.data, TargetColumn::None)?;
    let data = data.select_features(&spec.feature_names).map_err(|e| Failure {
        code: EXIT_DATA,
        message: format!(
            "model expects {} feature column(s) {:?}: {e}",
            spec.feature_names.len(),
            spec.feature_names
        ),
    })?;
    let predictions = model.predict(&data.features, &CallCounter::new(), Exec::default())?;
    let mut out: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| io_failure(path, e))?)),
        None => Box::new(io::stdout().lock()),
    };
    let write = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "prediction")?;
        for p in &predictions {
            writeln!(out, "{p}")?;
        }
        out.flush()
    };
    write(out.as_mut()).map_err(|e| io_failure(a.out.as_deref().unwrap_or(Path::new("<stdout>")), e))
}
