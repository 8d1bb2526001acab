//! End-to-end tests of the binary: exit codes, report determinism, schema
//! round-trips, and CSV emission.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn certify_holds_exits_zero_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "c.json",
        r#"{"p": 0.25, "q": 0.25, "s": 2.0, "trials": 50, "dim": 2, "seed": 9}"#,
    );
    let out1 = run(&["certify", "joint-convexity", "--config", &cfg]);
    assert_eq!(out1.status.code(), Some(0), "{}", String::from_utf8_lossy(&out1.stderr));
    let out2 = run(&["certify", "joint-convexity", "--config", &cfg]);
    assert_eq!(out1.stdout, out2.stdout, "reports must be byte-identical");
}

#[test]
fn certify_violated_exits_four() {
    // n = 1 scalar family |a|^{1.5} / b is not jointly convex.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "v.json",
        r#"{"p": 0.6666666666666666, "q": 0.0, "s": 1.5, "trials": 500, "dim": 1, "seed": 11}"#,
    );
    let out = run(&["certify", "joint-convexity", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn schema_violations_exit_two() {
    let out = run(&["certify", "joint-convexity"]); // missing p/q/s
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.json", "{not json");
    let out = run(&["certify", "joint-convexity", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["eval", "no-such-functional"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_three() {
    // Singular PSD input to a negative power.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "d.json",
        r#"{
            "p": 0.25, "q": 0.25, "s": 2.0,
            "matrices": {
                "a": {"dim": 1, "entries": [["1", "0"]]},
                "b": {"dim": 1, "entries": [["0", "0"]]},
                "c": {"dim": 1, "entries": [["1", "0"]]}
            }
        }"#,
    );
    let out = run(&["eval", "psi-pqs", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    // No partial report on stdout.
    assert!(out.stdout.is_empty());
}

#[test]
fn search_witness_and_exhaustion_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "s.json",
        r#"{"p": 0.3, "s": 3.0, "dims": [2], "budget": 20000, "seed": 42}"#,
    );
    let out = run(&["search", "nonconcavity", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["report"]["margin"].as_f64().unwrap() > 1e-6);

    let cfg = write_cfg(
        dir.path(),
        "x.json",
        r#"{"p": 1.0, "s": 2.0, "dims": [2], "budget": 2000, "seed": 7}"#,
    );
    let out = run(&["search", "nonconvexity", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(5));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["status"], "exhausted");
}

#[test]
fn eval_prints_seventeen_digit_value() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "e.json",
        r#"{
            "p": 2.0, "alpha": -0.5, "beta": -0.5,
            "matrices": {
                "p": {"dim": 1, "entries": [["4", "0"]]},
                "x": {"dim": 1, "entries": [["3", "0"]]}
            }
        }"#,
    );
    let out = run(&["eval", "lambda", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["report"]["value_float"].as_f64().unwrap();
    assert!((value - 2.25).abs() < 1e-12);
    // 17 significant digits: the printed string round-trips the float.
    let printed = v["report"]["value"].as_str().unwrap();
    assert_eq!(printed, format!("{value:.16e}"));
    assert_eq!(printed.parse::<f64>().unwrap().to_bits(), value.to_bits());
}

#[test]
fn out_file_and_csv_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let csv_path = dir.path().join("gaps.csv");
    let cfg = write_cfg(
        dir.path(),
        "o.json",
        r#"{"p": 0.25, "q": 0.25, "s": 2.0, "trials": 20, "dim": 2, "seed": 3}"#,
    );
    let out = run(&[
        "certify",
        "joint-convexity",
        "--config",
        &cfg,
        "--out",
        out_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["kind"], "cert-report");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("trial,gap,scale"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn metrics_and_demo_exit_zero() {
    let out = run(&["metrics", "norm-metric-mismatch", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["demonstrated"], true);

    let out = run(&["demo", "all", "--dim", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["pass"], true);
}

#[test]
fn config_replay_reproduces_search_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "r.json",
        r#"{"alpha": -0.5, "beta": -0.5, "p": 1.5, "dim": 1, "seed": 21}"#,
    );
    let a = run(&["search", "lambda-violation", "--config", &cfg]);
    let b = run(&["search", "lambda-violation", "--config", &cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
