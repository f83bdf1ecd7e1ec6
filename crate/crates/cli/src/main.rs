//! `arglearn`: discretize tables, learn theories, predict, evaluate and run
//! experiment grids from the command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arglearn::data::{load_csv, Column};
use arglearn::experiment::{
    fit_scheme, format_table, run_experiment, run_on_case_model, run_on_table, ExperimentOutcome,
    TrainedModel,
};
use arglearn::{apply_scheme, Binning, Bins, CaseModel, Error, ExperimentConfig, Learner, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "arglearn",
    version,
    about = "Learn defeasible arguments from tabular data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bin the numeric columns of a CSV file and print the schemes as JSON.
    Discretize {
        #[arg(long, alias = "dataset_path", alias = "input")]
        dataset_path: PathBuf,
        #[arg(long, default_value = "equal-width")]
        binning: Binning,
        #[arg(long, default_value = "2")]
        bins: Bins,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the binned table here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Learn from the whole dataset and write the model as JSON.
    Learn {
        #[command(flatten)]
        config: ConfigArgs,
        /// Model file; printed to stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Predict the target for every row of a CSV file.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, alias = "dataset_path", alias = "input")]
        dataset_path: PathBuf,
    },
    /// Score a model on a labelled CSV file.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, alias = "dataset_path", alias = "input")]
        dataset_path: PathBuf,
    },
    /// Run one train/test experiment.
    Experiment {
        #[command(flatten)]
        config: ConfigArgs,
        /// Print the full report as JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Run a JSON list of experiment configs in parallel.
    Grid {
        /// JSON array of experiment configs.
        #[arg(long)]
        configs: PathBuf,
        /// Per-run outputs go to numbered subdirectories here.
        #[arg(long, alias = "output_dir")]
        output_dir: Option<PathBuf>,
    },
}

/// Every experiment field as a flag; flags override values from `--config`.
#[derive(Args)]
struct ConfigArgs {
    /// Experiment config JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, alias = "dataset_path")]
    dataset_path: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    learner: Option<Learner>,
    #[arg(long)]
    binning: Option<Binning>,
    #[arg(long)]
    bins: Option<Bins>,
    #[arg(long, alias = "max_premise_size")]
    max_premise_size: Option<usize>,
    #[arg(long, alias = "exception_depth")]
    exception_depth: Option<usize>,
    #[arg(long, alias = "split_fraction")]
    split_fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, alias = "output_dir")]
    output_dir: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let mut value: serde_json::Value = serde_json::from_str(&read(path)?)?;
                let obj = value
                    .as_object_mut()
                    .ok_or_else(|| Error::input("config file must hold a JSON object"))?;
                // Allow files that rely on flags for the required fields.
                obj.entry("dataset_path").or_insert("".into());
                obj.entry("target").or_insert("".into());
                obj.entry("learner").or_insert("pruned_search".into());
                obj.entry("binning").or_insert("equal-width".into());
                obj.entry("bins").or_insert(2.into());
                serde_json::from_value(value)?
            }
            None => ExperimentConfig::new(
                PathBuf::new(),
                String::new(),
                self.learner.unwrap_or(Learner::PrunedSearch),
            ),
        };
        if let Some(v) = self.dataset_path {
            config.dataset_path = v;
        }
        if let Some(v) = self.target {
            config.target = v;
        }
        if let Some(v) = self.learner {
            config.learner = v;
        }
        if let Some(v) = self.binning {
            config.binning = v;
        }
        if let Some(v) = self.bins {
            config.bins = v;
        }
        if let Some(v) = self.max_premise_size {
            config.max_premise_size = v;
        }
        if let Some(v) = self.exception_depth {
            config.exception_depth = v;
        }
        if let Some(v) = self.split_fraction {
            config.split_fraction = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.output_dir {
            config.output_dir = Some(v);
        }
        if config.dataset_path.as_os_str().is_empty() {
            return Err(Error::input("no dataset given (--dataset-path)"));
        }
        config.validate()?;
        Ok(config)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<TrainedModel> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn discretize(
    dataset: &Path,
    binning: Binning,
    bins: Bins,
    seed: u64,
    output: Option<&Path>,
) -> Result<()> {
    let table = load_csv(dataset)?;
    let mut schemes = Vec::new();
    let mut columns: Vec<Vec<String>> = Vec::new();
    for (name, col) in table.headers.iter().zip(&table.columns) {
        match col {
            Column::Numeric(v) => {
                let scheme = fit_scheme(v, binning, bins, seed)
                    .map_err(|e| Error::input(format!("column {name}: {e}")))?
                    .named(name);
                columns.push(
                    v.iter()
                        .map(|&x| apply_scheme(x, &scheme).to_string())
                        .collect(),
                );
                schemes.push(scheme);
            }
            Column::Categorical(v) => columns.push(v.clone()),
        }
    }
    if let Some(out) = output {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(&table.headers)?;
        for r in 0..table.n_rows() {
            w.write_record(columns.iter().map(|c| c[r].as_str()))?;
        }
        w.flush()?;
    }
    println!("{}", serde_json::to_string_pretty(&schemes)?);
    Ok(())
}

fn learn(mut config: ExperimentConfig, output: Option<&Path>) -> Result<()> {
    config.split_fraction = 1.0;
    config.output_dir = None;
    let outcome = if is_json(&config.dataset_path) {
        let model = CaseModel::from_json(&read(&config.dataset_path)?)?;
        run_on_case_model(&config, &model)?
    } else {
        run_on_table(&config, &load_csv(&config.dataset_path)?)?
    };
    let json = serde_json::to_string_pretty(&outcome.model)?;
    match output {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    eprintln!(
        "training accuracy {:.4}, F1 {:.4}",
        outcome.train.accuracy, outcome.train.weighted_f1
    );
    Ok(())
}

fn predict(model: &Path, dataset: &Path) -> Result<()> {
    let model = load_model(model)?;
    let table = load_csv(dataset)?;
    for p in model.predict_table(&table)? {
        match p {
            Some(v) => println!("{v}"),
            None => println!("?"),
        }
    }
    Ok(())
}

fn evaluate(model: &Path, dataset: &Path) -> Result<()> {
    let model = load_model(model)?;
    let report = model.score_table(&load_csv(dataset)?)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn experiment(config: ExperimentConfig, json: bool) -> Result<()> {
    let outcome = run_experiment(&config)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&arglearn::experiment::ReportFile::of(&outcome))?
        );
    } else {
        print!("{}", format_table(std::slice::from_ref(&outcome)));
        println!(
            "seed {}, {} train / {} test rows, test abstentions {:.1}%, training {:.1} ms",
            config.seed,
            outcome.n_train,
            outcome.n_test,
            outcome.test.abstention_rate * 100.0,
            outcome.train_ms
        );
    }
    Ok(())
}

fn grid(configs: &Path, output_dir: Option<&Path>) -> Result<()> {
    let mut configs: Vec<ExperimentConfig> = serde_json::from_str(&read(configs)?)?;
    if let Some(dir) = output_dir {
        for (i, c) in configs.iter_mut().enumerate() {
            c.output_dir = Some(dir.join(format!("run-{i:03}")));
        }
    }
    let outcomes: Vec<ExperimentOutcome> = configs
        .par_iter()
        .map(run_experiment)
        .collect::<Result<_>>()?;
    let table = format_table(&outcomes);
    if let Some(dir) = output_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("table.txt"), &table)?;
    }
    print!("{table}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Discretize {
            dataset_path,
            binning,
            bins,
            seed,
            output,
        } => discretize(&dataset_path, binning, bins, seed, output.as_deref()),
        Command::Learn { config, output } => learn(config.resolve()?, output.as_deref()),
        Command::Predict {
            model,
            dataset_path,
        } => predict(&model, &dataset_path),
        Command::Evaluate {
            model,
            dataset_path,
        } => evaluate(&model, &dataset_path),
        Command::Experiment { config, json } => experiment(config.resolve()?, json),
        Command::Grid {
            configs,
            output_dir,
        } => grid(&configs, output_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
