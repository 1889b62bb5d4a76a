use std::process::{Command, Output};

use serde_json::Value;

use collatz_lab::{parse_rational, ClassLabel, Dyadic, ParityVector};

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], cap: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_collatz-lab"));
    cmd.args(args).env_remove("COLLATZ_LAB_CAP");
    if let Some(c) = cap {
        cmd.env("COLLATZ_LAB_CAP", c);
    }
    cmd.output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_seed_seven() {
    let v = json(&["classify", "7"]);
    assert_eq!(v["label"], "R[A0-][B-][S-][M-]");
    assert_eq!(v["grade"], "Definite");
    assert_eq!(v["b_inf"], "1");
    let label: ClassLabel = v["label"].as_str().unwrap().parse().unwrap();
    assert_eq!(label, ClassLabel::trivial_cycle());
}

#[test]
fn divergent_unit() {
    let v = json(&["unit", "110"]);
    assert_eq!(v["verdict"], "Diverges");
    assert_eq!(v["label"], "NR[A+][B+][S+][M+]");
    assert_eq!(v["periodicity"]["kind"], "BetaOnly");
    let b: Dyadic = serde_json::from_value(v["b_s"].clone()).unwrap();
    assert_eq!(b, Dyadic::new(5, 3));
}

#[test]
fn converging_unit_limit() {
    let v = json(&["unit", "100"]);
    assert_eq!(v["verdict"], "Converges");
    let b = parse_rational(v["limit"]["b_inf"].as_str().unwrap()).unwrap();
    assert_eq!(b.to_string(), "1/5");
}

#[test]
fn parity_solve_and_encode() {
    let v = json(&["parity", "solve", "1100"]);
    assert_eq!(v["class"]["residue"], "3");
    assert_eq!(v["class"]["modulus"], "16");
    assert_eq!(v["minimal_seed"], "3");
    let e = json(&["parity", "encode", "7", "7"]);
    let bits: ParityVector = serde_json::from_value(e["vector"].clone()).unwrap();
    assert_eq!(bits.to_string(), "1110100");
}

#[test]
fn coefficients_of_661() {
    let v = json(&["coeffs", "661", "11"]);
    assert_eq!(v["a"]["value"], "729/2048");
    let b: Dyadic = serde_json::from_value(v["b"].clone()).unwrap();
    assert_eq!(b, Dyadic::new(13747, 11));
}

#[test]
fn trajectory_terms() {
    let v = json(&["traj", "7", "--steps", "3"]);
    assert_eq!(v["terms"], serde_json::json!(["7", "11", "17", "26"]));
}

#[test]
fn matrix_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let out = run(&[
        "--format", "csv", "matrix", "--generator", "1", "--order", "3", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["seed", "T1", "T2", "T3"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(&rows[3], &csv::StringRecord::from(vec!["7", "11", "17", "26"]));
}

#[test]
fn matrix_json_parses() {
    let v = json(&["matrix", "--generator", "2", "--order", "4"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 16);
}

#[test]
fn cap_violation_exits_three() {
    let out = run_env(&["matrix", "--generator", "1", "--order", "6"], Some("4"));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("COLLATZ_LAB_CAP"));
    let ok = run_env(&["matrix", "--generator", "1", "--order", "4"], Some("4"));
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bogus"][..],
        &["classify"],
        &["matrix", "--generator", "3", "--order", "2"],
        &["unit", "12x"],
        &["--format", "csv", "classify", "7"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn range_survey_is_clean() {
    let out = run(&["classify", "--range", "1..100000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("watch:"));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut count = 0;
    for line in stdout.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["label"], "R[A0-][B-][S-][M-]");
        assert_eq!(v["b_inf"], "1");
        count += 1;
    }
    assert_eq!(count, 100_000);
}

#[test]
fn proportions_csv() {
    let out = run(&["--format", "csv", "proportions", "--order", "8", "--mode", "exact", "--class", "a"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("8,37,256,37,256"));
}

#[test]
fn series_table() {
    let out = run(&["--format", "table", "series", "--family", "zeros-ones", "--max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("661"));
}
