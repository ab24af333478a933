//! End-to-end tests of the `it2tsk` binary: every subcommand driven through
//! a real process in a temp directory, plus the failure exits.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn it2tsk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_it2tsk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_csv_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .expect("file readable")
        .lines()
        .map(str::to_string)
        .collect()
}

/// Parse a `name value` metrics file into (name, value-string) pairs.
fn read_metrics(path: &Path) -> Vec<(String, String)> {
    std::fs::read_to_string(path)
        .expect("metrics readable")
        .lines()
        .map(|line| {
            let (k, v) = line.split_once(' ').expect("key-value line");
            (k.to_string(), v.to_string())
        })
        .collect()
}

#[test]
fn gen_plant_writes_expected_series_start() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("plant.csv");
    let run = it2tsk(&[
        "gen", "plant", "--points", "50", "--out", out.to_str().unwrap(),
    ]);
    assert_success(&run);

    let lines = read_csv_lines(&out);
    assert_eq!(lines.len(), 51); // header + 50 rows
    assert_eq!(lines[0], "x1,x2,y");
    // From rest, the first emitted point is x = [z(1), z(0)] = [0, 0] with
    // target z(2) = sin(4/25).
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&first[..2], &[0.0, 0.0]);
    assert!((first[2] - (4.0f64 / 25.0).sin()).abs() < 1e-12);
}

#[test]
fn gen_sinc_grid_excludes_origin_and_matches_function() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("sinc.csv");
    let run = it2tsk(&[
        "gen", "sinc", "--points", "121", "--lo", "-40", "--hi", "40", "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&run);

    let lines = read_csv_lines(&out);
    assert_eq!(lines.len(), 122);
    assert_eq!(lines[0], "x1,y");
    for line in &lines[1..] {
        let (x, y): (f64, f64) = {
            let mut it = line.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        };
        assert!(x != 0.0, "grid must exclude the origin");
        assert!((y - x.sin() / x).abs() < 1e-12);
    }
}

fn write_experiment_config(dir: &Path, csv: &Path, out_dir: &Path) -> std::path::PathBuf {
    let config = dir.join("exp.toml");
    std::fs::write(
        &config,
        format!(
            r#"
[dataset]
kind = "csv"
path = "{}"
target = "y"

[split]
mode = "shuffled"
train_fraction = 0.7
seed = 3

[model]
clusters = 2
fuzzifier_low = 1.5
fuzzifier_high = 7.0
l2_penalty = 1e-4
gaussian_weight = 0.5
gaussian_sharpness = 3.14
convergence_tol = 1e-9
max_outer_iters = 3

[model.sgd]
learning_rate = 0.2
max_epochs = 150
batch_size = 4
seed = 0

[output]
dir = "{}"
"#,
            csv.display(),
            out_dir.display()
        ),
    )
    .expect("config written");
    config
}

#[test]
fn fit_writes_artifacts_and_is_deterministic() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("sinc.csv");
    assert_success(&it2tsk(&[
        "gen", "sinc", "--points", "61", "--lo", "-10", "--hi", "10", "--out",
        csv.to_str().unwrap(),
    ]));

    let out_a = dir.path().join("out_a");
    let out_b = dir.path().join("out_b");
    let config = write_experiment_config(dir.path(), &csv, &out_a);

    assert_success(&it2tsk(&["fit", "--config", config.to_str().unwrap()]));
    for artifact in ["model.txt", "metrics.txt", "predictions.csv", "errors.csv"] {
        assert!(out_a.join(artifact).exists(), "{artifact} written");
    }
    let metrics = read_metrics(&out_a.join("metrics.txt"));
    let mse: f64 = metrics
        .iter()
        .find(|(k, _)| k == "mse")
        .expect("mse present")
        .1
        .parse()
        .expect("numeric mse");
    assert!(mse.is_finite() && mse >= 0.0);

    // Same config and seed into a fresh directory: identical metrics except
    // the wall-clock line, identical model file.
    assert_success(&it2tsk(&[
        "fit",
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out_b.to_str().unwrap(),
    ]));
    let strip_seconds = |path: &Path| {
        read_metrics(path)
            .into_iter()
            .filter(|(k, _)| k != "seconds")
            .collect::<Vec<_>>()
    };
    assert_eq!(
        strip_seconds(&out_a.join("metrics.txt")),
        strip_seconds(&out_b.join("metrics.txt"))
    );
    assert_eq!(
        std::fs::read_to_string(out_a.join("model.txt")).unwrap(),
        std::fs::read_to_string(out_b.join("model.txt")).unwrap()
    );
}

#[test]
fn predict_and_eval_roundtrip_on_generated_data() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("sinc.csv");
    assert_success(&it2tsk(&[
        "gen", "sinc", "--points", "61", "--lo", "-10", "--hi", "10", "--out",
        csv.to_str().unwrap(),
    ]));
    let out_dir = dir.path().join("out");
    let config = write_experiment_config(dir.path(), &csv, &out_dir);
    assert_success(&it2tsk(&["fit", "--config", config.to_str().unwrap()]));
    let model = out_dir.join("model.txt");

    // predict: one interval row per input row, ordered endpoints.
    let pred = dir.path().join("pred.csv");
    assert_success(&it2tsk(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--input",
        csv.to_str().unwrap(),
        "--out",
        pred.to_str().unwrap(),
    ]));
    let lines = read_csv_lines(&pred);
    assert_eq!(
        lines[0],
        "index,predicted,lower,upper,predicted_norm,lower_norm,upper_norm"
    );
    assert_eq!(lines.len(), 62);
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 7);
        if cells[1].is_empty() {
            continue; // no rule fired at this row
        }
        let lower: f64 = cells[2].parse().unwrap();
        let upper: f64 = cells[3].parse().unwrap();
        assert!(lower <= upper, "interval endpoints ordered: {line}");
    }

    // eval: key-value metrics over the same file.
    let metrics_path = dir.path().join("metrics.txt");
    assert_success(&it2tsk(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--data",
        csv.to_str().unwrap(),
        "--out",
        metrics_path.to_str().unwrap(),
    ]));
    let metrics = read_metrics(&metrics_path);
    for key in ["mse", "r2", "med_abs_err", "n_test", "n_no_fire", "n_dropped_rows"] {
        assert!(
            metrics.iter().any(|(k, _)| k == key),
            "metrics file has `{key}`"
        );
    }
    let n_test: usize = metrics
        .iter()
        .find(|(k, _)| k == "n_test")
        .unwrap()
        .1
        .parse()
        .unwrap();
    assert_eq!(n_test, 61);
}

#[test]
fn failures_exit_nonzero_with_stage_tagged_messages() {
    let dir = tempdir().unwrap();

    // Missing experiment config.
    let run = it2tsk(&["fit", "--config", dir.path().join("nope.toml").to_str().unwrap()]);
    assert!(!run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr).to_string();
    assert!(stderr.contains("config:"), "stage tag in: {stderr}");

    // Missing eval input.
    let out_dir = dir.path().join("out");
    let csv = dir.path().join("sinc.csv");
    assert_success(&it2tsk(&[
        "gen", "sinc", "--points", "31", "--lo", "-10", "--hi", "10", "--out",
        csv.to_str().unwrap(),
    ]));
    let config = write_experiment_config(dir.path(), &csv, &out_dir);
    assert_success(&it2tsk(&["fit", "--config", config.to_str().unwrap()]));
    let model = out_dir.join("model.txt");
    let run = it2tsk(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--data",
        dir.path().join("missing.csv").to_str().unwrap(),
        "--out",
        dir.path().join("m.txt").to_str().unwrap(),
    ]);
    assert!(!run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr).to_string();
    assert!(stderr.contains("input:"), "stage tag in: {stderr}");

    // Feature-count mismatch: plant inputs against a sinc-trained model.
    let plant = dir.path().join("plant.csv");
    assert_success(&it2tsk(&[
        "gen", "plant", "--points", "20", "--out", plant.to_str().unwrap(),
    ]));
    let run = it2tsk(&[
        "predict",
        "--model",
        model.to_str().unwrap(),
        "--input",
        plant.to_str().unwrap(),
        "--out",
        dir.path().join("p.csv").to_str().unwrap(),
    ]);
    assert!(!run.status.success());
    let stderr = String::from_utf8_lossy(&run.stderr).to_string();
    assert!(
        stderr.contains("input:") && stderr.contains("expected 1 feature"),
        "mismatch message in: {stderr}"
    );
}
