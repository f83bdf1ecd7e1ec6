use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn arglearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arglearn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TOY: &str = "x,y,label\n1,10,low\n2,11,low\n3,12,low\n8,30,high\n9,31,high\n10,29,high\n2,10,low\n9,30,high\n";

#[test]
fn experiment_on_case_model_fixture() {
    let fixture = repo_file("fixtures/presumption_of_innocence.json");
    let out = arglearn(&[
        "experiment",
        "--dataset-path",
        path_str(&fixture),
        "--target",
        "guilty",
        "--learner",
        "pruned_search",
        "--split-fraction",
        "1.0",
        "--json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["train"]["accuracy"], 1.0);
    assert_eq!(report["n_train"], 3);
}

#[test]
fn experiment_prints_the_results_table() {
    let out = arglearn(&[
        "experiment",
        "--dataset-path",
        path_str(&repo_file("data/boston_housing.csv")),
        "--target",
        "MEDV",
        "--learner",
        "hero",
        "--binning",
        "equal-depth",
        "--bins",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("| data type"), "{text}");
    assert!(text.contains("EDBinning"), "{text}");
    assert!(text.contains("| train"), "{text}");
    assert!(text.contains("| test"), "{text}");
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let body = serde_json::json!({
        "dataset_path": repo_file("fixtures/presumption_of_innocence.json"),
        "target": "innocent",
        "learner": "hero",
        "binning": "equal-width",
        "bins": 2,
        "split_fraction": 1.0
    });
    std::fs::write(&config, body.to_string()).unwrap();
    let out = arglearn(&[
        "experiment",
        "--config",
        path_str(&config),
        "--target",
        "guilty",
        "--json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["config"]["target"], "guilty");
    assert_eq!(report["config"]["learner"], "hero");
}

#[test]
fn learn_predict_evaluate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.csv");
    std::fs::write(&data, TOY).unwrap();
    let model = dir.path().join("model.json");
    let out = arglearn(&[
        "learn",
        "--dataset-path",
        path_str(&data),
        "--target",
        "label",
        "--learner",
        "dectree",
        "--output",
        path_str(&model),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(model.exists());

    let out = arglearn(&[
        "predict",
        "--model",
        path_str(&model),
        "--dataset-path",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let predictions: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(predictions.len(), 8);

    let out = arglearn(&[
        "evaluate",
        "--model",
        path_str(&model),
        "--dataset-path",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["accuracy"], 1.0);
}

#[test]
fn discretize_writes_binned_table() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.csv");
    std::fs::write(&data, TOY).unwrap();
    let binned = dir.path().join("binned.csv");
    let out = arglearn(&[
        "discretize",
        "--dataset-path",
        path_str(&data),
        "--binning",
        "kmeans",
        "--bins",
        "2",
        "--output",
        path_str(&binned),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let schemes: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(schemes.as_array().is_some_and(|a| !a.is_empty()));
    let text = std::fs::read_to_string(&binned).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,label"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn grid_runs_every_config() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = repo_file("fixtures/presumption_of_innocence.json");
    let configs = dir.path().join("grid.json");
    let runs: Vec<serde_json::Value> = ["pruned_search", "hero"]
        .iter()
        .map(|l| {
            serde_json::json!({
                "dataset_path": fixture, "target": "guilty", "learner": l,
                "binning": "equal-width", "bins": 2, "split_fraction": 1.0
            })
        })
        .collect();
    std::fs::write(&configs, serde_json::to_string(&runs).unwrap()).unwrap();
    let out_dir = dir.path().join("out");
    let out = arglearn(&[
        "grid",
        "--configs",
        path_str(&configs),
        "--output-dir",
        path_str(&out_dir),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out_dir.join("table.txt").exists());
    for run in ["run-000", "run-001"] {
        for file in ["model.json", "report.json", "report.txt"] {
            assert!(out_dir.join(run).join(file).exists(), "{run}/{file}");
        }
    }
}

#[test]
fn input_errors_exit_with_one() {
    let out = arglearn(&[
        "experiment",
        "--dataset-path",
        "/no/such/file.csv",
        "--target",
        "MEDV",
        "--learner",
        "hero",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error"), "{}", stderr(&out));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "a,b\n1,2\n3,oops\n").unwrap();
    let out = arglearn(&["discretize", "--dataset-path", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let out = arglearn(&["experiment", "--learner", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));

    let out = arglearn(&[
        "experiment",
        "--dataset-path",
        path_str(&repo_file("data/boston_housing.csv")),
        "--target",
        "MEDV",
        "--learner",
        "hero",
        "--split-fraction",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = arglearn(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    for sub in [
        "discretize",
        "learn",
        "predict",
        "evaluate",
        "experiment",
        "grid",
    ] {
        assert!(stdout(&out).contains(sub), "{sub} missing from help");
    }
}
