//! End-to-end contract tests for the `afe` binary: exit codes and
//! diagnostics, schema validity of every emitted JSON report, emitted file
//! sets, and export round-trips.

use std::path::Path;
use std::process::{Command, Output};

fn data_file(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_line(output: &Output) -> String {
    let text = String::from_utf8_lossy(&output.stderr).trim_end().to_string();
    assert_eq!(text.lines().count(), 1, "expected one diagnostic line, got: {text}");
    text
}

/// Parse a written report, check it against the bundled JSON schema, and
/// return it for further inspection.
fn assert_valid_report(path: &Path, expected_kind: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let schema_value: serde_json::Value = serde_json::from_str(afe::report::REPORT_SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema_value).unwrap();
    {
        let outcome = compiled.validate(&value);
        if let Err(errors) = outcome {
            let messages: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{} fails schema validation: {messages:?}", path.display());
        }
    }
    assert_eq!(value["kind"], expected_kind);
    assert_eq!(value["schema_version"], afe::report::SCHEMA_VERSION);
    value
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["rank", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    // No subcommand.
    assert_eq!(run(&[]).status.code(), Some(1));
    // Unknown flag.
    let schema = data_file("lung.schema.json");
    let data = data_file("lung.csv");
    let out = run(&["rank", "--data", &data, "--schema", &schema, "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown model name.
    let out = run(&["rank", "--data", &data, "--schema", &schema, "--model", "xgb"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("xgb"));
}

#[test]
fn missing_data_file_exits_one_and_names_the_path() {
    let schema = data_file("lung.schema.json");
    let out = run(&["rank", "--data", "/no/such/data.csv", "--schema", &schema]);
    assert_eq!(out.status.code(), Some(1));
    let line = stderr_line(&out);
    assert!(line.contains("/no/such/data.csv"), "diagnostic was: {line}");
    assert!(line.starts_with("configuration error"), "diagnostic was: {line}");
}

#[test]
fn unreadable_config_file_exits_one_and_names_the_path() {
    let data = data_file("lung.csv");
    let schema = data_file("lung.schema.json");
    let out = run(&[
        "rank", "--data", &data, "--schema", &schema, "--config", "/no/such/config.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).contains("/no/such/config.json"));
}

#[test]
fn invalid_threads_env_exits_one() {
    let data = data_file("lung.csv");
    let schema = data_file("lung.schema.json");
    let out = Command::new(env!("CARGO_BIN_EXE_afe"))
        .args(["rank", "--data", &data, "--schema", &schema])
        .env("AFE_THREADS", "many")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).contains("AFE_THREADS"));
}

#[test]
fn pipeline_failures_exit_two_and_name_the_stage() {
    // Three features is below the evaluator's minimum, which only surfaces
    // once the pipeline starts — a stage failure, not a flag problem.
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("tiny.csv");
    let schema = dir.path().join("tiny.schema.json");
    std::fs::write(
        &data,
        "a,b,c,y\n1,2,3,0\n4,5,6,1\n7,8,9,0\n1,5,9,1\n2,6,7,0\n3,8,4,1\n",
    )
    .unwrap();
    std::fs::write(
        &schema,
        r#"{"a": "feature-numeric", "b": "feature-numeric", "c": "feature-numeric", "y": "label"}"#,
    )
    .unwrap();
    let out = run(&[
        "rank",
        "--data", data.to_str().unwrap(),
        "--schema", schema.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let line = stderr_line(&out);
    assert!(line.starts_with("pipeline error at stage "), "diagnostic was: {line}");
}

#[test]
fn rank_emits_a_valid_report_and_ranking_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let data = data_file("lung.csv");
    let schema = data_file("lung.schema.json");
    let out = run(&[
        "rank", "--data", &data, "--schema", &schema,
        "--model", "gnb", "--seed", "1", "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = assert_valid_report(&out_path, "rank");
    assert_eq!(report["payload"]["provenance"]["master_seed"], 1);

    // Ranking CSV: header plus one row per feature, sorted by weight.
    let csv = std::fs::read_to_string(out_path.with_extension("csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "feature,weight");
    assert_eq!(lines.len(), 16, "header plus fifteen features");
    let weights: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(weights.windows(2).all(|w| w[0] >= w[1]), "descending weights");

    // The sorted ranking also lands on stdout.
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("feature"), "stdout shows the table header");
}

#[test]
fn importance_emits_a_valid_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("importance.json");
    let data = data_file("lung.csv");
    let schema = data_file("lung.schema.json");
    let out = run(&[
        "importance", "--data", &data, "--schema", &schema,
        "--model", "gnb", "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = assert_valid_report(&out_path, "importance");
    let vectors = report["payload"]["vectors"].as_array().unwrap();
    assert_eq!(vectors.len(), 3);
    let methods: Vec<&str> = vectors.iter().map(|v| v["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["PCT", "SHAP", "GA"]);
}

#[test]
fn benchmark_emits_table_and_figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("bench.json");
    let out = run(&[
        "benchmark", "--suite", "synth",
        "--pfi-repeats", "3", "--background-size", "12",
        "--ga-pop", "8", "--ga-elite", "3", "--ga-iters", "4",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = assert_valid_report(&out_path, "benchmark");
    assert_eq!(report["payload"]["suite"], "synth");
    assert_eq!(report["payload"]["rows"].as_array().unwrap().len(), 30);

    let table = std::fs::read_to_string(out_path.with_extension("csv")).unwrap();
    assert_eq!(table.lines().count(), 31, "header plus thirty rows");
    assert!(table.starts_with("dataset,algorithm,method,accuracy,f1,recall,precision"));

    for figure in ["accuracy", "f1", "recall", "precision"] {
        let path = out_path.with_extension(format!("figure_{figure}.csv"));
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing figure file {}: {e}", path.display()));
        assert_eq!(text.lines().count(), 7, "header plus six algorithms");
        assert!(text.starts_with("algorithm,baseline,PCT,XAI,GA,AFE"));
    }
}

#[test]
fn export_data_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    let data = data_file("heart.csv");
    let schema = data_file("heart.schema.json");

    let out = run(&[
        "export-data", "--data", &data, "--schema", &schema, "--out", first.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // Re-export the export through its own emitted schema: byte-identical.
    let out = run(&[
        "export-data",
        "--data", first.to_str().unwrap(),
        "--schema", first.with_extension("schema.json").to_str().unwrap(),
        "--out", second.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
        "re-export changed bytes"
    );

    let rows = std::fs::read_to_string(&first).unwrap().lines().count();
    assert_eq!(rows, 919, "header plus all heart rows");
}

#[test]
fn export_data_limit_zero_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("head.csv");
    let data = data_file("lung.csv");
    let schema = data_file("lung.schema.json");

    let out = run(&[
        "export-data", "--data", &data, "--schema", &schema,
        "--limit", "0", "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 1, "header only");
    assert!(text.starts_with("AGE,"));

    let out = run(&[
        "export-data", "--data", &data, "--schema", &schema,
        "--limit", "5", "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(text.lines().count(), 6, "header plus five rows");
}
