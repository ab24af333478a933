//! Declarative experiments: a TOML spec selecting a dataset, split, and
//! hyper-parameters, a runner that writes artifacts, and the built-in
//! benchmark suites.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{Config, SgdConfig};
use crate::data::{
    load_csv, plant_dataset, sinc_dataset, sparse_dataset, split_dataset, Split, SplitMode,
};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics::{evaluate_model, labeled_predictions, MetricsReport};
use crate::model::{FitReport, TSKModel};

/// Which dataset an experiment runs on.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    /// Second-order nonlinear plant series started from rest.
    Plant {
        #[serde(default = "default_plant_points")]
        n_points: usize,
    },
    /// Cardinal sine on a uniform grid.
    Sinc {
        #[serde(default = "default_sinc_points")]
        n_points: usize,
        #[serde(default = "default_sinc_lo")]
        lo: f64,
        #[serde(default = "default_sinc_hi")]
        hi: f64,
    },
    /// Synthetic sparse block-regime regression data.
    Sparse {
        #[serde(default = "default_sparse_points")]
        n_points: usize,
        #[serde(default = "default_sparse_features")]
        n_features: usize,
        #[serde(default)]
        seed: u64,
    },
    /// A headered CSV file with one target column.
    Csv { path: PathBuf, target: String },
}

fn default_plant_points() -> usize {
    1000
}
fn default_sinc_points() -> usize {
    121
}
fn default_sinc_lo() -> f64 {
    -40.0
}
fn default_sinc_hi() -> f64 {
    40.0
}
fn default_sparse_points() -> usize {
    500
}
fn default_sparse_features() -> usize {
    20
}

/// Materialize the dataset a spec describes.
pub fn load_dataset(spec: &DatasetSpec) -> Result<Dataset> {
    match spec {
        DatasetSpec::Plant { n_points } => plant_dataset(*n_points, 0.0, 0.0),
        DatasetSpec::Sinc { n_points, lo, hi } => sinc_dataset(*n_points, *lo, *hi),
        DatasetSpec::Sparse {
            n_points,
            n_features,
            seed,
        } => sparse_dataset(*n_points, *n_features, *seed),
        DatasetSpec::Csv { path, target } => Ok(load_csv(path, target)?.data),
    }
}

/// Train/test split settings.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub mode: SplitMode,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            mode: SplitMode::Shuffled,
            train_fraction: 0.7,
            seed: 0,
        }
    }
}

/// Artifact locations, all relative to `dir`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub model_file: String,
    pub metrics_file: String,
    pub predictions_file: String,
    pub errors_file: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: PathBuf::from("."),
            model_file: "model.txt".into(),
            metrics_file: "metrics.txt".into(),
            predictions_file: "predictions.csv".into(),
            errors_file: "errors.csv".into(),
        }
    }
}

/// A complete experiment description, loadable from TOML.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub split: SplitSpec,
    #[serde(default)]
    pub model: Config,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentSpec {
    /// Parse a spec from TOML text.
    pub fn from_toml_str(text: &str) -> Result<ExperimentSpec> {
        toml::from_str(text).map_err(|e| Error::ExperimentSpec(e.to_string()))
    }

    /// Read and parse a spec file.
    pub fn from_file(path: &Path) -> Result<ExperimentSpec> {
        let text = std::fs::read_to_string(path)?;
        ExperimentSpec::from_toml_str(&text)
    }

    /// Render the experiment description back to TOML.
    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("experiment serialization cannot fail")
    }
}

/// Everything a finished experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub model: TSKModel,
    pub fit_report: FitReport,
    pub metrics: MetricsReport,
    pub model_path: PathBuf,
    pub metrics_path: PathBuf,
    pub predictions_path: PathBuf,
    pub errors_path: PathBuf,
    /// Fit plus evaluation time, excluding artifact writing.
    pub seconds: f64,
}

/// Run one experiment end to end: load, split, fit, evaluate, and write the
/// model, metrics, and per-point prediction artifacts. Errors carry the
/// stage they happened in.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    let data = load_dataset(&spec.dataset).map_err(|e| e.in_stage("load"))?;
    let split = split_dataset(
        &data,
        spec.split.train_fraction,
        spec.split.seed,
        spec.split.mode,
    )
    .map_err(|e| e.in_stage("split"))?;

    let started = Instant::now();
    let (model, fit_report) = TSKModel::fit_with_report(&split.train, &spec.model)?;
    let metrics = evaluate_model(&model, &split.test).map_err(|e| e.in_stage("evaluate"))?;
    let seconds = started.elapsed().as_secs_f64();

    let write = || -> Result<(PathBuf, PathBuf, PathBuf, PathBuf)> {
        let dir = &spec.output.dir;
        std::fs::create_dir_all(dir)?;
        let model_path = dir.join(&spec.output.model_file);
        model.save(&model_path)?;

        let metrics_path = dir.join(&spec.output.metrics_file);
        std::fs::write(&metrics_path, render_metrics(&metrics, &fit_report, seconds))?;

        let preds = labeled_predictions(&model, &split.test)?;
        let predictions_path = dir.join(&spec.output.predictions_file);
        let mut writer = csv::Writer::from_path(&predictions_path)?;
        writer.write_record(["index", "actual", "predicted", "actual_norm", "predicted_norm"])?;
        for (pos, &k) in preds.indices.iter().enumerate() {
            let raw_actual = split.test.target(k);
            let raw_predicted = model.normalization.invert_target(preds.predicted[pos]);
            writer.write_record([
                split.test_indices[k].to_string(),
                raw_actual.to_string(),
                raw_predicted.to_string(),
                preds.actual[pos].to_string(),
                preds.predicted[pos].to_string(),
            ])?;
        }
        writer.flush()?;

        let errors_path = dir.join(&spec.output.errors_file);
        let mut writer = csv::Writer::from_path(&errors_path)?;
        writer.write_record(["index", "abs_err_norm"])?;
        for (pos, &k) in preds.indices.iter().enumerate() {
            let err = (preds.predicted[pos] - preds.actual[pos]).abs();
            writer.write_record([split.test_indices[k].to_string(), err.to_string()])?;
        }
        writer.flush()?;
        Ok((model_path, metrics_path, predictions_path, errors_path))
    };
    let (model_path, metrics_path, predictions_path, errors_path) =
        write().map_err(|e| e.in_stage("write"))?;

    Ok(ExperimentOutcome {
        model,
        fit_report,
        metrics,
        model_path,
        metrics_path,
        predictions_path,
        errors_path,
        seconds,
    })
}

/// Key-value rendering of an experiment's metrics, one `name value` pair per
/// line.
pub fn render_metrics(metrics: &MetricsReport, fit: &FitReport, seconds: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mse {}", metrics.mse);
    let _ = writeln!(out, "r2 {}", metrics.r2);
    let _ = writeln!(out, "med_abs_err {}", metrics.med_abs_err);
    let _ = writeln!(out, "n_test {}", metrics.n_test);
    let _ = writeln!(out, "n_no_fire {}", metrics.n_no_fire);
    let _ = writeln!(out, "train_loss {}", fit.training_loss);
    let _ = writeln!(out, "partition_iterations {}", fit.partition_iterations);
    let _ = writeln!(out, "partition_converged {}", fit.partition_converged);
    let _ = writeln!(out, "consequent_epochs {}", fit.consequent_epochs);
    let _ = writeln!(out, "n_unfired_train {}", fit.n_unfired_train);
    let _ = writeln!(out, "degenerate_targets {}", fit.degenerate_targets);
    let _ = writeln!(out, "seconds {seconds}");
    out
}

/// Aggregate result of one benchmark suite.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub name: String,
    /// Normalized-scale test MSE per seed, in seed order.
    pub per_seed_mse: Vec<f64>,
    pub mean_mse: f64,
    pub mean_r2: f64,
    pub seconds: f64,
}

impl BenchReport {
    fn from_runs(name: &str, runs: Vec<MetricsReport>, seconds: f64) -> BenchReport {
        let per_seed_mse: Vec<f64> = runs.iter().map(|m| m.mse).collect();
        let mean_mse = per_seed_mse.iter().sum::<f64>() / per_seed_mse.len() as f64;
        let mean_r2 = runs.iter().map(|m| m.r2).sum::<f64>() / runs.len() as f64;
        BenchReport {
            name: name.into(),
            per_seed_mse,
            mean_mse,
            mean_r2,
            seconds,
        }
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        format!(
            "{}: mean mse {:.3e}, mean r2 {:.4}, {} run(s), {:.2}s",
            self.name,
            self.mean_mse,
            self.mean_r2,
            self.per_seed_mse.len(),
            self.seconds
        )
    }
}

fn fit_and_score(split: &Split, config: &Config) -> Result<MetricsReport> {
    let model = TSKModel::fit(&split.train, config)?;
    evaluate_model(&model, &split.test)
}

/// Benchmark settings for the plant series.
///
/// The small batches keep the partition's summed minibatch gradient stable
/// at this learning rate, while the consequent stage needs the long epoch
/// budget: its loss is nearly flat along directions where rule outputs
/// compensate each other, and the final accuracy comes from walking those
/// directions down.
pub fn plant_bench_config() -> Config {
    Config {
        clusters: 4,
        fuzzifier_low: 1.5,
        fuzzifier_high: 7.0,
        l2_penalty: 0.0,
        gaussian_weight: 0.5,
        gaussian_sharpness: 3.14,
        convergence_tol: 1e-12,
        max_outer_iters: 10,
        sgd: SgdConfig {
            learning_rate: 0.3,
            max_epochs: 10_000,
            batch_size: 4,
            seed: 0,
        },
    }
}

/// Plant-series benchmark: one contiguous 50/50 split, one seed.
pub fn bench_plant() -> Result<BenchReport> {
    let started = Instant::now();
    let data = plant_dataset(default_plant_points(), 0.0, 0.0)?;
    let split = split_dataset(&data, 0.5, 0, SplitMode::Contiguous)?;
    let metrics = fit_and_score(&split, &plant_bench_config())?;
    Ok(BenchReport::from_runs(
        "plant",
        vec![metrics],
        started.elapsed().as_secs_f64(),
    ))
}

/// Benchmark settings for the cardinal sine grid.
///
/// The oscillating tails need sharply selective firing to resolve: the
/// Student-t term peaks at zero hyperplane distance, so a pure-tail mix
/// (`gaussian_weight` 0) snaps each labeled point to its nearest local
/// model, and a light ridge penalty keeps the four planes from collapsing
/// onto each other on unlucky splits.
pub fn sinc_bench_config(seed: u64) -> Config {
    Config {
        clusters: 4,
        fuzzifier_low: 1.5,
        fuzzifier_high: 7.0,
        l2_penalty: 1e-4,
        gaussian_weight: 0.0,
        gaussian_sharpness: 3.14,
        convergence_tol: 1e-12,
        max_outer_iters: 12,
        sgd: SgdConfig {
            learning_rate: 0.3,
            max_epochs: 6000,
            batch_size: 4,
            seed,
        },
    }
}

/// Seeds used by [`bench_sinc`].
pub const SINC_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

/// Cardinal-sine benchmark: five seeded shuffled splits, mean test MSE.
pub fn bench_sinc() -> Result<BenchReport> {
    let started = Instant::now();
    let data = sinc_dataset(default_sinc_points(), default_sinc_lo(), default_sinc_hi())?;
    let mut runs = Vec::with_capacity(SINC_SEEDS.len());
    for &seed in &SINC_SEEDS {
        let split = split_dataset(&data, 0.7, seed, SplitMode::Shuffled)?;
        runs.push(fit_and_score(&split, &sinc_bench_config(seed))?);
    }
    Ok(BenchReport::from_runs(
        "sinc",
        runs,
        started.elapsed().as_secs_f64(),
    ))
}

/// Benchmark settings for the sparse suite at a given membership mix.
///
/// Once the partition locks onto the planted regimes, each cluster's
/// distance distribution is tight; the Gaussian term then peaks at the
/// cluster's typical distance rather than at zero, firing hardest on the
/// wrong rules, while the Student-t term peaks at zero distance and picks
/// the right one. Comparing mixes under one shared setting exposes exactly
/// that contrast.
pub fn sparse_bench_config(gaussian_weight: f64, seed: u64) -> Config {
    Config {
        clusters: 3,
        fuzzifier_low: 1.6,
        fuzzifier_high: 4.7,
        l2_penalty: 0.003,
        gaussian_weight,
        gaussian_sharpness: 3.7,
        convergence_tol: 1e-10,
        max_outer_iters: 12,
        sgd: SgdConfig {
            learning_rate: 0.03,
            max_epochs: 600,
            batch_size: 4,
            seed,
        },
    }
}

/// Seeds used by [`bench_sparse`].
pub const SPARSE_SEEDS: [u64; 10] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];

/// Gaussian mix weight of the tail-heavy arm of [`bench_sparse`].
pub const SPARSE_TAIL_MIX: f64 = 0.15;

/// Sparse-data benchmark: ten seeded datasets fitted twice, once with a
/// tail-heavy membership mix and once purely Gaussian. Returns the two
/// reports in that order.
pub fn bench_sparse() -> Result<(BenchReport, BenchReport)> {
    let started = Instant::now();
    let mut tail_runs = Vec::with_capacity(SPARSE_SEEDS.len());
    let mut gauss_runs = Vec::with_capacity(SPARSE_SEEDS.len());
    for &seed in &SPARSE_SEEDS {
        let data = sparse_dataset(default_sparse_points(), default_sparse_features(), 1000 + seed)?;
        let split = split_dataset(&data, 0.7, seed, SplitMode::Shuffled)?;
        tail_runs.push(fit_and_score(&split, &sparse_bench_config(SPARSE_TAIL_MIX, seed))?);
        gauss_runs.push(fit_and_score(&split, &sparse_bench_config(1.0, seed))?);
    }
    let seconds = started.elapsed().as_secs_f64();
    Ok((
        BenchReport::from_runs("sparse tail-heavy", tail_runs, seconds / 2.0),
        BenchReport::from_runs("sparse pure-gaussian", gauss_runs, seconds / 2.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spec_fills_defaults() {
        let spec = ExperimentSpec::from_toml_str(
            "[dataset]\nkind = \"plant\"\n",
        )
        .unwrap();
        assert!(matches!(spec.dataset, DatasetSpec::Plant { n_points: 1000 }));
        assert_eq!(spec.split.train_fraction, 0.7);
        assert_eq!(spec.split.mode, SplitMode::Shuffled);
        assert_eq!(spec.model.clusters, 2);
        assert_eq!(spec.model.sgd.batch_size, 32);
        assert_eq!(spec.output.model_file, "model.txt");
    }

    #[test]
    fn full_spec_round_trips() {
        let text = r#"
[dataset]
kind = "sinc"
n_points = 61
lo = -10.0
hi = 10.0

[split]
mode = "contiguous"
train_fraction = 0.8
seed = 3

[model]
clusters = 4
fuzzifier_low = 1.2
fuzzifier_high = 5.0
l2_penalty = 0.001
gaussian_weight = 0.3
gaussian_sharpness = 2.0

[model.sgd]
learning_rate = 0.02
max_epochs = 50
batch_size = 8
seed = 9

[output]
dir = "artifacts"
model_file = "m.txt"
"#;
        let spec = ExperimentSpec::from_toml_str(text).unwrap();
        match spec.dataset {
            DatasetSpec::Sinc { n_points, lo, hi } => {
                assert_eq!(n_points, 61);
                assert_eq!(lo, -10.0);
                assert_eq!(hi, 10.0);
            }
            other => panic!("wrong dataset: {other:?}"),
        }
        assert_eq!(spec.split.mode, SplitMode::Contiguous);
        assert_eq!(spec.model.clusters, 4);
        assert_eq!(spec.model.sgd.seed, 9);
        assert_eq!(spec.output.dir, PathBuf::from("artifacts"));
        assert_eq!(spec.output.model_file, "m.txt");
        // Partial [model] sections keep defaults elsewhere.
        assert_eq!(spec.model.max_outer_iters, 100);

        let rendered = spec.to_toml_string();
        let again = ExperimentSpec::from_toml_str(&rendered).unwrap();
        assert_eq!(again.model, spec.model);
        assert_eq!(again.split.train_fraction, spec.split.train_fraction);
    }

    #[test]
    fn malformed_spec_is_reported() {
        let err = ExperimentSpec::from_toml_str("[dataset]\nkind = \"volcano\"\n").unwrap_err();
        assert!(matches!(err, Error::ExperimentSpec(_)));
        let err = ExperimentSpec::from_toml_str("not toml at all [").unwrap_err();
        assert!(matches!(err, Error::ExperimentSpec(_)));
    }

    #[test]
    fn csv_dataset_spec_loads() {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "a,y").unwrap();
        for i in 0..10 {
            writeln!(f, "{},{}", i, 2 * i).unwrap();
        }
        f.flush().unwrap();
        let data = load_dataset(&DatasetSpec::Csv {
            path: f.path().to_path_buf(),
            target: "y".into(),
        })
        .unwrap();
        assert_eq!(data.len(), 10);
        assert_eq!(data.target(3), 6.0);
    }

    fn small_experiment(dir: &Path) -> ExperimentSpec {
        ExperimentSpec {
            dataset: DatasetSpec::Plant { n_points: 60 },
            split: SplitSpec {
                mode: SplitMode::Contiguous,
                train_fraction: 0.7,
                seed: 0,
            },
            model: Config {
                clusters: 2,
                max_outer_iters: 5,
                sgd: SgdConfig {
                    learning_rate: 0.05,
                    max_epochs: 5,
                    batch_size: 8,
                    seed: 1,
                },
                ..Config::default()
            },
            output: OutputSpec {
                dir: dir.to_path_buf(),
                ..OutputSpec::default()
            },
        }
    }

    #[test]
    fn experiment_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let spec = small_experiment(dir.path());
        let outcome = run_experiment(&spec).unwrap();

        assert!(outcome.model_path.exists());
        assert!(outcome.metrics_path.exists());
        assert!(outcome.predictions_path.exists());
        assert!(outcome.errors_path.exists());

        // The saved model reloads to the fitted one.
        let reloaded = TSKModel::load(&outcome.model_path).unwrap();
        assert_eq!(reloaded, outcome.model);

        // Metrics file carries the headline number.
        let metrics_text = std::fs::read_to_string(&outcome.metrics_path).unwrap();
        assert!(metrics_text.contains(&format!("mse {}", outcome.metrics.mse)));
        assert!(metrics_text.contains("n_test 18"));

        // Predictions CSV has a header plus one row per fired test point.
        let preds_text = std::fs::read_to_string(&outcome.predictions_path).unwrap();
        let rows = preds_text.lines().count();
        assert_eq!(
            rows,
            1 + outcome.metrics.n_test - outcome.metrics.n_no_fire
        );
        assert!(preds_text.starts_with("index,actual,predicted"));
    }

    #[test]
    fn experiment_is_deterministic() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let a = run_experiment(&small_experiment(dir_a.path())).unwrap();
        let b = run_experiment(&small_experiment(dir_b.path())).unwrap();
        assert_eq!(
            std::fs::read_to_string(&a.model_path).unwrap(),
            std::fs::read_to_string(&b.model_path).unwrap()
        );
        assert_eq!(a.metrics.mse.to_bits(), b.metrics.mse.to_bits());
    }

    #[test]
    fn experiment_errors_carry_their_stage() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = small_experiment(dir.path());
        spec.dataset = DatasetSpec::Csv {
            path: dir.path().join("missing.csv"),
            target: "y".into(),
        };
        match run_experiment(&spec) {
            Err(Error::Stage { stage, .. }) => assert_eq!(stage, "load"),
            other => panic!("expected stage-tagged error, got {other:?}"),
        }

        let mut spec = small_experiment(dir.path());
        spec.split.train_fraction = 0.999;
        match run_experiment(&spec) {
            Err(Error::Stage { stage, .. }) => assert_eq!(stage, "split"),
            other => panic!("expected stage-tagged error, got {other:?}"),
        }
    }
}
