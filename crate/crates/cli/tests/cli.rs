use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riccati-verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn reports(text: &str) -> Vec<Value> {
    serde_json::from_str::<Value>(text)
        .unwrap()
        .as_array()
        .unwrap()
        .clone()
}

#[test]
fn generated_experiment_verifies_with_f_only() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("e1.json");
    let report = dir.path().join("r.json");
    let p = problem.to_str().unwrap();
    assert!(cli(&["gen", "--kind", "experiment1", "--output", p])
        .status
        .success());

    let out = cli(&[
        "verify",
        "--method",
        "f",
        "--input",
        p,
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = reports(&fs::read_to_string(&report).unwrap());
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["status"], "success");
    assert_eq!(r[0]["problem_id"], "e1");
    assert!(r[0]["nre"].as_f64().unwrap() <= 1e-10);

    // H and K fail on this problem, so `all` exits non-zero
    let out = cli(&["verify", "--input", p]);
    assert_eq!(out.status.code(), Some(1));
    let r = reports(&String::from_utf8(out.stdout).unwrap());
    let status: Vec<_> = r
        .iter()
        .map(|x| x["status"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(status, ["failure", "failure", "success"]);
}

#[test]
fn known_problem_with_solution_file() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("k.json");
    let solution = dir.path().join("xs.json");
    let out = cli(&[
        "gen",
        "--kind",
        "known",
        "--n",
        "5",
        "--seed",
        "3",
        "--complex",
        "--output",
        problem.to_str().unwrap(),
        "--solution",
        solution.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let xs: Value = serde_json::from_str(&fs::read_to_string(&solution).unwrap()).unwrap();
    assert_eq!(xs["re"].as_array().unwrap().len(), 5);
    let out = cli(&[
        "verify",
        "--input",
        problem.to_str().unwrap(),
        "--kmax",
        "50",
        "--tau",
        "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let out = cli(&[
        "bench",
        "--suite",
        "default",
        "--method",
        "f",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        table.lines().next().unwrap(),
        "problem_id,n,method,status,nre,k,garp,time,stabilizing"
    );
    assert_eq!(table.lines().count(), 4);
    assert_eq!(reports(&fs::read_to_string(&json).unwrap()).len(), 3);
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"format\":\"1\",\"n\":2}").unwrap();
    let out = cli(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("problem"));
    let out = cli(&[
        "verify",
        "--input",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_tau_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("l.json");
    assert!(cli(&[
        "gen",
        "--kind",
        "lyapunov",
        "--n",
        "3",
        "--output",
        problem.to_str().unwrap()
    ])
    .status
    .success());
    let out = cli(&[
        "verify",
        "--method",
        "k",
        "--tau",
        "1.0",
        "--input",
        problem.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = reports(&String::from_utf8(out.stdout).unwrap());
    assert!(r[0]["status"].as_str().unwrap().starts_with("error:"));
}
