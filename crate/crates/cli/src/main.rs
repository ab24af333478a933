//! `it2tsk`: identify and use interval type-2 Takagi-Sugeno fuzzy models
//! from the command line.
//!
//! Subcommands: `gen` writes benchmark datasets as headered CSV, `fit` runs
//! a declarative TOML experiment, `predict` maps an input CSV to interval
//! outputs, `eval` scores a saved model against labeled data, and `bench`
//! runs a built-in benchmark suite. All failures exit nonzero with a
//! stage-tagged message on stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use it2tsk::antecedent::firing_at_point;
use it2tsk::data::{load_csv, plant_dataset, sinc_dataset};
use it2tsk::dataset::Dataset;
use it2tsk::experiment::{bench_plant, bench_sinc, bench_sparse, BenchReport, ExperimentSpec};
use it2tsk::typereduce::km_reduce;
use it2tsk::{Error, Result, TSKModel};

#[derive(Parser)]
#[command(
    name = "it2tsk",
    version,
    about = "Interval type-2 Takagi-Sugeno fuzzy model identification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark dataset as a headered CSV file
    Gen {
        #[command(subcommand)]
        dataset: GenCommand,
    },
    /// Fit a model from a TOML experiment config and write its artifacts
    Fit {
        /// Experiment config file (dataset, split, hyper-parameters, output)
        #[arg(long)]
        config: PathBuf,
        /// Override the output directory from the config
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Override the model file (resolved inside the output directory
        /// unless absolute)
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Override the split seed from the config
        #[arg(long)]
        seed: Option<u64>,
        /// Override the training fraction from the config
        #[arg(long)]
        train_fraction: Option<f64>,
    },
    /// Predict interval outputs for a CSV of inputs.
    ///
    /// Firing strengths depend on the output value, so reference-free
    /// prediction is a fixed point of "fire at the current estimate,
    /// re-estimate"; models whose rules overlap in input space can have
    /// several self-consistent fixed points, and this command reports the
    /// one reached from the mean rule output. To score labeled data, use
    /// `eval` (or the `fit` artifacts), which fire at the observed output.
    Predict {
        /// Saved model file
        #[arg(long)]
        model: PathBuf,
        /// Headered CSV of inputs; a column named by --target is ignored
        #[arg(long)]
        input: PathBuf,
        /// Output CSV of crisp and interval predictions
        #[arg(long)]
        out: PathBuf,
        /// Name of a target column to ignore when present
        #[arg(long, default_value = "y")]
        target: String,
    },
    /// Evaluate a model on labeled CSV data and write a key-value metrics file
    Eval {
        /// Saved model file
        #[arg(long)]
        model: PathBuf,
        /// Headered CSV with feature columns and a target column
        #[arg(long)]
        data: PathBuf,
        /// Name of the target column
        #[arg(long, default_value = "y")]
        target: String,
        /// Metrics file to write (one `name value` pair per line)
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a built-in benchmark suite and print its report
    Bench {
        #[command(subcommand)]
        suite: BenchCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Second-order nonlinear plant series started from given initial values
    Plant {
        /// Number of emitted (input, output) points
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Initial series value z(0)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z0: f64,
        /// Initial series value z(1)
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z1: f64,
        /// CSV file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Cardinal sine sampled on a uniform grid with the origin excluded
    Sinc {
        /// Number of grid points
        #[arg(long, default_value_t = 121)]
        points: usize,
        /// Grid lower bound
        #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
        lo: f64,
        /// Grid upper bound
        #[arg(long, default_value_t = 40.0, allow_negative_numbers = true)]
        hi: f64,
        /// CSV file to write
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Plant series benchmark (one contiguous split)
    Plant,
    /// Sinc grid benchmark (five seeded splits)
    Sinc,
    /// Sparse-data benchmark (tail-heavy vs pure-Gaussian membership mix)
    Sparse,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { dataset } => gen(dataset),
        Command::Fit {
            config,
            out_dir,
            model_out,
            seed,
            train_fraction,
        } => fit(&config, out_dir, model_out, seed, train_fraction),
        Command::Predict {
            model,
            input,
            out,
            target,
        } => predict(&model, &input, &out, &target),
        Command::Eval {
            model,
            data,
            target,
            out,
        } => eval(&model, &data, &target, &out),
        Command::Bench { suite } => bench(suite),
    }
}

// ------------------------------------------------------------------- gen

fn gen(command: GenCommand) -> Result<()> {
    let (data, out) = match command {
        GenCommand::Plant { points, z0, z1, out } => (
            plant_dataset(points, z0, z1).map_err(|e| e.in_stage("generate"))?,
            out,
        ),
        GenCommand::Sinc { points, lo, hi, out } => (
            sinc_dataset(points, lo, hi).map_err(|e| e.in_stage("generate"))?,
            out,
        ),
    };
    write_dataset_csv(&out, &data).map_err(|e| e.in_stage("write"))?;
    println!(
        "gen: wrote {} rows ({} feature column(s) + target) to {}",
        data.len(),
        data.n_features(),
        out.display()
    );
    Ok(())
}

/// Write a dataset as headered CSV: feature columns `x1..xm`, target `y`.
fn write_dataset_csv(path: &Path, data: &Dataset) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=data.n_features()).map(|j| format!("x{j}")).collect();
    header.push("y".into());
    writer.write_record(&header)?;
    for k in 0..data.len() {
        let mut record: Vec<String> = data.row(k).iter().map(f64::to_string).collect();
        record.push(data.target(k).to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

// ------------------------------------------------------------------- fit

fn fit(
    config: &Path,
    out_dir: Option<PathBuf>,
    model_out: Option<PathBuf>,
    seed: Option<u64>,
    train_fraction: Option<f64>,
) -> Result<()> {
    let mut spec = ExperimentSpec::from_file(config).map_err(|e| e.in_stage("config"))?;
    if let Some(dir) = out_dir {
        spec.output.dir = dir;
    }
    if let Some(path) = model_out {
        spec.output.model_file = path.to_string_lossy().into_owned();
    }
    if let Some(seed) = seed {
        spec.split.seed = seed;
    }
    if let Some(fraction) = train_fraction {
        spec.split.train_fraction = fraction;
    }

    let outcome = it2tsk::experiment::run_experiment(&spec)?;
    println!("fit: model -> {}", outcome.model_path.display());
    println!(
        "fit: metrics -> {} (normalized mse {:.6e}, r2 {:.4}, {} test point(s), {:.1}s)",
        outcome.metrics_path.display(),
        outcome.metrics.mse,
        outcome.metrics.r2,
        outcome.metrics.n_test,
        outcome.seconds
    );
    println!(
        "fit: predictions -> {}, errors -> {}",
        outcome.predictions_path.display(),
        outcome.errors_path.display()
    );
    Ok(())
}

// --------------------------------------------------------------- predict

/// Read an input CSV for prediction: every column except an optional target
/// column is a feature, parsed strictly as a finite number.
fn read_input_csv(path: &Path, target: &str, n_features: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let headers = reader.headers()?.clone();
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| headers.get(i) != Some(target))
        .collect();
    if feature_cols.len() != n_features {
        return Err(Error::InvalidDataset(format!(
            "expected {n_features} feature column(s), found {} in {}",
            feature_cols.len(),
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let mut row = Vec::with_capacity(feature_cols.len());
        for &i in &feature_cols {
            let cell = record.get(i).unwrap_or("").trim();
            let value: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                Error::InvalidDataset(format!(
                    "row {}, column `{}`: `{cell}` is not a finite number",
                    line + 2,
                    headers.get(i).unwrap_or("?")
                ))
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidDataset("no input rows".into()));
    }
    Ok(rows)
}

fn predict(model_path: &Path, input: &Path, out: &Path, target: &str) -> Result<()> {
    let model = TSKModel::load(model_path).map_err(|e| e.in_stage("model"))?;
    let rows = read_input_csv(input, target, model.n_features()).map_err(|e| e.in_stage("input"))?;

    let views = model.rule_views();
    let mut writer = csv::Writer::from_path(out).map_err(Error::from)?;
    writer.write_record([
        "index",
        "predicted",
        "lower",
        "upper",
        "predicted_norm",
        "lower_norm",
        "upper_norm",
    ])?;
    let mut n_no_fire = 0usize;
    for (k, x) in rows.iter().enumerate() {
        // Crisp prediction first; the interval is the type-reduced set fired
        // at that estimate.
        let interval = model.predict(x).and_then(|crisp| {
            let x_norm = model.normalization.apply_features(x)?;
            let y_norm = model.normalization.apply_target(crisp);
            let firings = firing_at_point(
                &views,
                &x_norm,
                y_norm,
                model.gaussian_weight,
                model.gaussian_sharpness,
            )?;
            let outputs = model.rule_outputs_normalized(&x_norm)?;
            let km = km_reduce(&outputs, &firings)?;
            Ok((crisp, km.y_lower, km.y_upper))
        });
        match interval {
            Ok((crisp, lower_norm, upper_norm)) => {
                writer.write_record([
                    k.to_string(),
                    crisp.to_string(),
                    model.normalization.invert_target(lower_norm).to_string(),
                    model.normalization.invert_target(upper_norm).to_string(),
                    model.normalization.apply_target(crisp).to_string(),
                    lower_norm.to_string(),
                    upper_norm.to_string(),
                ])?;
            }
            Err(Error::NoRuleFires) => {
                n_no_fire += 1;
                writer.write_record([k.to_string(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new()])?;
            }
            Err(e) => return Err(e.in_stage("predict")),
        }
    }
    writer.flush().map_err(|e| Error::from(std::io::Error::from(e)))?;
    println!(
        "predict: wrote {} prediction(s) to {} ({} with no firing rule)",
        rows.len(),
        out.display(),
        n_no_fire
    );
    Ok(())
}

// ------------------------------------------------------------------ eval

fn eval(model_path: &Path, data: &Path, target: &str, out: &Path) -> Result<()> {
    let model = TSKModel::load(model_path).map_err(|e| e.in_stage("model"))?;
    let load = load_csv(data, target).map_err(|e| e.in_stage("input"))?;
    if load.data.n_features() != model.n_features() {
        return Err(Error::InvalidDataset(format!(
            "expected {} feature column(s), found {}",
            model.n_features(),
            load.data.n_features()
        ))
        .in_stage("input"));
    }
    let metrics =
        it2tsk::metrics::evaluate_model(&model, &load.data).map_err(|e| e.in_stage("evaluate"))?;

    let mut text = String::new();
    text.push_str(&format!("mse {}\n", metrics.mse));
    text.push_str(&format!("r2 {}\n", metrics.r2));
    text.push_str(&format!("med_abs_err {}\n", metrics.med_abs_err));
    text.push_str(&format!("n_test {}\n", metrics.n_test));
    text.push_str(&format!("n_no_fire {}\n", metrics.n_no_fire));
    text.push_str(&format!("n_dropped_rows {}\n", load.dropped_rows));
    std::fs::write(out, &text).map_err(|e| Error::from(e).in_stage("write"))?;

    print!("{text}");
    println!("eval: metrics -> {}", out.display());
    Ok(())
}

// ----------------------------------------------------------------- bench

fn print_bench(report: &BenchReport) {
    println!("{}", report.summary());
    for (i, mse) in report.per_seed_mse.iter().enumerate() {
        println!("  run {i}: normalized mse {mse:.6e}");
    }
}

fn bench(suite: BenchCommand) -> Result<()> {
    match suite {
        BenchCommand::Plant => print_bench(&bench_plant()?),
        BenchCommand::Sinc => print_bench(&bench_sinc()?),
        BenchCommand::Sparse => {
            let (tail, gauss) = bench_sparse()?;
            print_bench(&tail);
            print_bench(&gauss);
            println!(
                "bench: tail-heavy mean mse {:.6e} vs pure-gaussian {:.6e}",
                tail.mean_mse, gauss.mean_mse
            );
        }
    }
    Ok(())
}
