//! End-to-end tests of the `bathtub` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bathtub(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bathtub"));
    cmd.args(args).env_remove("BATHTUB_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bathtub-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn same_config_gives_identical_bytes_across_thread_counts() {
    let dir = scratch_dir("determinism");
    let cfg = dir.join("params.cfg");
    std::fs::write(
        &cfg,
        "m = 1\nomega_minus = 1\nomega_plus = 1.7\nell = 0.5\nhbar = 0.3\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let one = bathtub(
        &["--config", cfg, "eig", "--n", "0..60"],
        &[("BATHTUB_THREADS", "1")],
    );
    let many = bathtub(
        &["--config", cfg, "eig", "--n", "0..60"],
        &[("BATHTUB_THREADS", "4")],
    );
    let again = bathtub(&["--config", cfg, "eig", "--n", "0..60"], &[]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, again.stdout);
    let count_a = bathtub(
        &["count", "--hbar-list", "0.1,0.05", "--mode", "1,0,0"],
        &[("BATHTUB_THREADS", "1")],
    );
    let count_b = bathtub(
        &["count", "--hbar-list", "0.1,0.05", "--mode", "1,0,0"],
        &[("BATHTUB_THREADS", "3")],
    );
    assert!(count_a.status.success());
    assert_eq!(count_a.stdout, count_b.stdout);
}

#[test]
fn csv_shape_and_number_format() {
    let out = bathtub(&["bohr", "--n", "3..7"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,E_bohr");
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        let value = line.split(',').nth(1).unwrap();
        let mantissa = value.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(
            mantissa.chars().filter(char::is_ascii_digit).count(),
            17,
            "{value}"
        );
    }
}

#[test]
fn json_is_one_object_per_line() {
    let out = bathtub(&["--format", "json", "eig", "--n", "0..5"], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["E_exact"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn every_subcommand_runs() {
    let dir = scratch_dir("subcommands");
    let report = dir.join("report.json");
    let csv = dir.join("heat.csv");
    for args in [
        vec!["eig"],
        vec!["bohr"],
        vec!["expand", "--order", "4"],
        vec!["oracle", "--count", "3", "--base-intervals", "2000"],
        vec!["orbits", "--E", "2", "--N", "1", "--kmax", "2"],
        vec!["count", "--hbar-list", "0.1"],
        vec![
            "--ell",
            "0",
            "--output",
            csv.to_str().unwrap(),
            "heat",
            "--points",
            "40",
            "--report",
            report.to_str().unwrap(),
        ],
        vec!["selftest", "--only", "2,10"],
    ] {
        let out = bathtub(&args, &[]);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let heat = std::fs::read_to_string(&csv).unwrap();
    assert!(heat.starts_with("t,exact,reference,D\n"));
    assert_eq!(heat.lines().count(), 41);
    let fit: serde_json::Value =
        serde_json::from_str(std::fs::read_to_string(&report).unwrap().trim()).unwrap();
    for key in [
        "coefficients",
        "log_coefficient",
        "predicted",
        "ratio",
        "condition",
    ] {
        assert!(!fit[key].is_null(), "{key}");
    }
}

#[test]
fn error_classes_have_distinct_exit_codes() {
    let dir = scratch_dir("errors");
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "m = 1\nmass = 2\n").unwrap();
    let cases: Vec<(Vec<&str>, Vec<(&str, &str)>, i32, &str)> = vec![
        (
            vec!["--config", bad.to_str().unwrap(), "eig"],
            vec![],
            3,
            "config",
        ),
        (vec!["eig"], vec![("BATHTUB_THREADS", "zero")], 3, "config"),
        (vec!["heat"], vec![], 4, "invalid_argument"),
        (
            vec![
                "oracle",
                "--count",
                "3",
                "--base-intervals",
                "200",
                "--tol",
                "1e-14",
            ],
            vec![],
            9,
            "oracle_accuracy",
        ),
        (vec!["orbits", "--N", "2"], vec![], 10, "unsupported"),
        (
            vec![
                "count",
                "--mode",
                "1,0,0",
                "--rho-center",
                "4",
                "--rho-width",
                "4",
            ],
            vec![],
            8,
            "isolation",
        ),
    ];
    for (args, envs, code, kind) in cases {
        let out = bathtub(&args, &envs);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err: serde_json::Value =
            serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
        assert_eq!(err["error"], kind);
        assert_eq!(err["exit_code"], code);
    }
    assert_eq!(bathtub(&["eig", "--n", "3"], &[]).status.code(), Some(2));
    assert_eq!(bathtub(&["frobnicate"], &[]).status.code(), Some(2));
}

#[test]
fn selftest_reports_failures_with_its_own_exit_code() {
    let out = bathtub(&["selftest", "--only", "10"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("PASS [10]"));
    let out = bathtub(&["selftest", "--only", "99"], &[]);
    assert_eq!(out.status.code(), Some(4));
}
