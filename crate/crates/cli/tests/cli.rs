use std::path::Path;
use std::process::{Command, Output};

use robustmr::wls::ivw;
use robustmr::{EffectsModel, SummarySet, WeightVector};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_robustmr"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const THREE: &str = "id,beta_x,se_x,beta_y,se_y\nrs1,0.05,0.01,0.006,0.004\nrs2,-0.07,0.012,-0.009,0.005\nrs3,0.04,0.01,0.003,0.004\n";

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn ivw_row_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "a.csv", THREE);
    let out = run(&["analyze", "--input", &input, "--methods", "ivw", "--seed", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));

    let set = SummarySet::from_columns(&[0.05, -0.07, 0.04], &[0.01, 0.012, 0.01], &[0.006, -0.009, 0.003], &[0.004, 0.005, 0.004])
        .unwrap()
        .harmonize();
    let expected = ivw(&set, &WeightVector::inverse_variance(&set), EffectsModel::MultiplicativeRandom).unwrap();

    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][0], "method");
    let estimates: Vec<&Vec<&str>> = rows.iter().filter(|r| r[0] != "diagnostic").skip(1).collect();
    assert_eq!(estimates.len(), 1);
    let r = estimates[0];
    assert_eq!((r[0], r[1]), ("ivw", "slope"));
    let num = |s: &str| s.parse::<f64>().unwrap();
    assert!((num(r[2]) - expected.theta).abs() < 1e-15);
    assert!((num(r[3]) - expected.se.unwrap()).abs() < 1e-15);
    assert!((num(r[4]) - expected.ci.unwrap().low).abs() < 1e-15);
    assert!((num(r[6]) - expected.p_value.unwrap()).abs() < 1e-15);
    assert_eq!(r[8], "ok");
    assert!(text.contains("diagnostic,q_ivw,"));
}

#[test]
fn egger_with_two_variants_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let two: String = THREE.lines().take(3).map(|l| format!("{l}\n")).collect();
    let input = write(dir.path(), "b.csv", &two);
    let out = run(&["analyze", "--input", &input, "--methods", "egger", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("at least 3"), "{}", stderr(&out));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.csv", "id,beta_x,se_x,beta_y,se_y\nrs1,0.05,abc,0.006,0.004\n");
    let out = run(&["analyze", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("row 1"), "{}", stderr(&out));

    let out = run(&["analyze", "--input", "/nonexistent/file.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let input = write(dir.path(), "d.csv", THREE);
    let out = run(&["analyze", "--input", &input, "--methods", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seeded_json_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "e.csv", THREE);
    let args = ["analyze", "--input", &input, "--format", "json", "--seed", "42", "--bootstrap-draws", "200"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["seed"], 42);
    let rows = doc["rows"].as_array().unwrap();
    // eleven methods, egger variants add an intercept row each, plus diagnostics
    assert!(rows.iter().filter(|r| r["parameter"] == "slope").count() == 11);
    assert_eq!(rows.iter().filter(|r| r["parameter"] == "intercept").count(), 4);
}

#[test]
fn missing_seed_is_announced() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "f.csv", THREE);
    let out = run(&["analyze", "--input", &input, "--methods", "simple-median", "--bootstrap-draws", "50"]);
    assert!(out.status.success());
    assert!(stderr(&out).starts_with("seed: "));
}

#[test]
fn robust_and_penalize_expand_selection() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "g.csv", THREE);
    let out = run(&["analyze", "--input", &input, "--methods", "ivw", "--robust", "--penalize", "--seed", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let methods: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .filter(|m| m != "diagnostic")
        .collect();
    assert_eq!(methods, ["ivw", "robust-ivw", "penalized-ivw", "penalized-robust-ivw"]);
}

fn simulate(extra: &[&str], out: &str) -> Output {
    let mut args = vec!["simulate", "--n", "2000", "--n-sim", "4", "--seed", "7", "--bootstrap-draws", "50", "--out", out];
    args.extend_from_slice(extra);
    run(&args)
}

fn report_rows(path: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn simulate_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv").to_str().unwrap().to_string();
    let out = simulate(&["--scenario", "1", "--theta", "0", "--j", "25"], &path);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("Simple median"));
    let rows = report_rows(&path);
    assert_eq!(rows[0].join(","), "row,mean,sd,mean_se,power,na_count,intercept_rejection");
    let methods = rows.iter().skip(1).filter(|r| !r[0].contains(':')).count();
    assert_eq!(methods, 11);
    assert!(rows.iter().any(|r| r[0] == "joint:simple-median+robust-ivw"));
    assert!(rows.iter().any(|r| r[0] == "diagnostic:mean_f"));
}

#[test]
fn simulate_scenario_4_has_intercept_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s4.csv").to_str().unwrap().to_string();
    let out = simulate(&["--scenario", "4", "--prop-invalid", "0.3", "--theta", "0.1", "--j", "10"], &path);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = report_rows(&path);
    let egger = rows.iter().find(|r| r[0] == "egger").unwrap();
    assert!(!egger[6].is_empty());
    let ivw = rows.iter().find(|r| r[0] == "ivw").unwrap();
    assert!(ivw[6].is_empty());
}

#[test]
fn simulate_rejects_invalid_flags() {
    let out = run(&["simulate", "--scenario", "1", "--prop-invalid", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--scenario", "2", "--n", "2001"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["simulate", "--scenario", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_output_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv").to_str().unwrap().to_string();
    let b = dir.path().join("b.csv").to_str().unwrap().to_string();
    assert!(simulate(&["--scenario", "3", "--threads", "1"], &a).status.success());
    assert!(simulate(&["--scenario", "3", "--threads", "2"], &b).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_to_stdout_without_out() {
    let out = run(&["simulate", "--scenario", "2", "--n", "2000", "--j", "10", "--n-sim", "2", "--seed", "1", "--methods", "ivw,egger"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("row,mean"));
    assert_eq!(text.lines().filter(|l| !l.contains(':')).count(), 3);
    assert!(stderr(&out).contains("Standard, intercept"));
}
