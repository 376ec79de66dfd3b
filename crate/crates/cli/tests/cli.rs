use std::path::PathBuf;
use std::process::{Command, Output};

use convchain::chains::TransitionMatrix;
use convchain::io::{matrix_from_csv, matrix_to_csv, SpectrumDoc};
use convchain::numerics::{rat, Rational};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convchain")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("convchain-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_k_i_small() {
    let o = run(&["build", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--N", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let m: TransitionMatrix<Rational> = matrix_from_csv(&text).unwrap();
    assert_eq!(m.rows(), vec![vec![rat(1, 2), rat(1, 4)], vec![rat(1, 2), rat(3, 4)]]);
    assert_eq!(matrix_to_csv(&m).unwrap(), text);
}

#[test]
fn spectrum_k_i_small() {
    let o = run(&["spectrum", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--N", "1"]);
    assert!(o.status.success());
    let doc = SpectrumDoc::from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.kappa, vec!["1", "1/4"]);
    assert_eq!(doc.lambda.params["p"], "2/3");
    assert!(doc.checks.iter().all(|c| c.passed));
}

#[test]
fn output_is_repeatable() {
    let args = ["build", "--case", "qH-iv", "--params", "a1=1/2", "b1=1/3", "a2=1/4", "b2=2/3", "q=1/2", "--N", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let float = ["build", "--case", "H-iv", "--params", "a1=1", "b1=2", "a2=0.5", "b2=3", "--N", "5", "--backend", "float"];
    let o = run(&float);
    assert!(o.status.success());
    let m: TransitionMatrix<f64> = matrix_from_csv(&stdout(&o)).unwrap();
    assert_eq!(matrix_to_csv(&m).unwrap(), stdout(&o));
}

#[test]
fn config_document_and_overrides() {
    let cfg = scratch("k1.json");
    std::fs::write(&cfg, r#"{"case": "K-i", "params": {"a": "1/2", "b": 0.5}, "N": 3}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["build", "--config", c, "--N", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x\\y,0,1\n0,1/2,1/4\n1,1/2,3/4\n");
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"case": "K-i", "colour": 1}"#).unwrap();
    let o = run(&["build", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["build", "--case", "qH-ii", "--N", "2"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--case", "K-i", "--params", "a=3/2", "b=1/2", "--N", "2"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--case", "K-i", "--params", "a=1/2", "b=1/2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["bd", "--family", "krawtchouk", "--params", "p=1/2", "--N", "2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tuning"));
}

#[test]
fn dual_evolve_and_sample() {
    let o = run(&["dual", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--N", "1"]);
    assert_eq!(stdout(&o), "x\\y,0,1\n0,3/4,1/2\n1,1/4,1/2\n");
    let o = run(&["evolve", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--N", "1", "--l", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x,value\n0,1/2\n1,1/2\n");
    let args = ["sample", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--N", "3", "--l", "2", "--count", "1000", "--seed", "7"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
}

#[test]
fn multiple_and_commuting() {
    let o = run(&["spectrum", "--pattern", "+-", "--params", "p1=1/2", "p2=1/2", "--N", "3"]);
    assert!(o.status.success());
    let doc = SpectrumDoc::from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.kappa[1], "1/4");
    let o = run(&["build", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--t", "1/2", "--N", "2"]);
    assert!(o.status.success());
    let o = run(&["build", "--case", "K-i", "--params", "a=1/2", "b=1/2", "--t", "2", "--N", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bd_small() {
    let o = run(&["bd", "--family", "krawtchouk", "--params", "p=1/2", "--N", "1", "--m", "1", "--t-s", "1/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x\\y,0,1\n0,3/4,1/4\n1,1/4,3/4\n");
    let o = run(&["bd", "--family", "hahn", "--params", "a=1", "b=1", "--N", "6", "--m", "2"]);
    assert!(o.status.success());
}

#[test]
fn semi_infinite_spectrum() {
    let o = run(&["spectrum", "--case", "M-i", "--params", "a=1", "b=1", "c=1/2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = SpectrumDoc::from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.kappa[1], "1/2");
}

#[test]
fn verify_identities_default_grid() {
    let o = run(&["verify", "--suite", "identities"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("0 failed"));
}
