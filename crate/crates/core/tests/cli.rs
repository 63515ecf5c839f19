//! Runs the `abharmonic` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abharmonic")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_passes_and_repeats_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for out in [&a, &b] {
            let o = run(&["--cmd", "verify", "--seed", "7", "--format", format, "--out", path_str(out)]);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        }
        let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
    let text = String::from_utf8(run(&["--cmd", "verify"]).stdout).unwrap();
    assert!(text.contains("DIVERGENT-as-expected"));
    assert!(!text.contains(",FAIL,"));
}

#[test]
fn inadmissible_parameters_exit_two() {
    assert_eq!(code(&run(&["--cmd", "verify", "--alpha", "-1", "--beta", "0.3"])), 2);
    assert_eq!(code(&run(&["--cmd", "extend", "--alpha", "-0.7", "--beta", "-0.6"])), 2);
    assert_eq!(code(&run(&["--cmd", "hardy-scan", "--p", "0.5"])), 2);
    assert_eq!(code(&run(&["--cmd", "bogus"])), 2);
}

#[test]
fn malformed_csv_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "theta,re,im\n0.0,1.0,0.0\nnot-a-number,2.0,0.0\n").unwrap();
    let o = run(&["--cmd", "extend", "--alpha", "0.5", "--beta", "0.5", "--in", path_str(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn sample_and_coefficient_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("f.json");
    fs::write(&json, r#"{"1": [1.0, 0.0], "-2": [0.0, 0.5]}"#).unwrap();
    let n = 64;
    let mut rows = String::from("theta,re,im\n");
    for j in 0..n {
        let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let re = t.cos() + 0.5 * (2.0 * t).sin();
        let im = t.sin() + 0.5 * (2.0 * t).cos();
        rows.push_str(&format!("{t:.17e},{re:.17e},{im:.17e}\n"));
    }
    let csv = dir.path().join("f.csv");
    fs::write(&csv, rows).unwrap();

    let args = |input: &Path| -> Vec<String> {
        ["--cmd", "extend", "--alpha", "1", "--beta", "-0.5", "--n", "64", "--radii", "0.3,0.7", "--in", path_str(input)]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let parse = |o: &Output| -> Vec<Vec<f64>> {
        assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        String::from_utf8_lossy(&o.stdout).lines().skip(1).map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect()
    };
    let from_json = parse(&Command::new(env!("CARGO_BIN_EXE_abharmonic")).args(args(&json)).output().unwrap());
    let from_csv = parse(&Command::new(env!("CARGO_BIN_EXE_abharmonic")).args(args(&csv)).output().unwrap());
    assert_eq!(from_json.len(), from_csv.len());
    for (a, b) in from_json.iter().zip(&from_csv) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }
}

#[test]
fn hardy_scan_reports_json() {
    let o = run(&["--cmd", "hardy-scan", "--alpha", "0.5", "--beta", "0.5", "--format", "json", "--n", "256"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn help_lists_verify_tags() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    for tag in [
        "angular-derivative-bound",
        "radial-derivative-bound",
        "negative-weight-blowup",
        "membership-table",
        "quasi-regular",
        "t-alpha-reduction",
    ] {
        assert!(text.contains(tag), "{tag}");
    }
}
