use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallball")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn chaos_sup_constant_is_pi_over_four() {
    let o = run(&["constants", "--chaos-sup", "--omega-one-norm", "1", "--t", "1", "--b", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.7853981634");
}

#[test]
fn harmonic_ground_state() {
    let o = run(&["lambda1", "--p", "2"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["constants", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["smallball", "--eps", "-0.5", "--samples", "10", "--steps", "8"]).status.code(), Some(2));
    assert_eq!(run(&["spectral", "--weights", "geometric:0.5"]).status.code(), Some(2));
    let o = run(&["constants", "--sup-cdf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--x"));
}

#[test]
fn json_output_is_reproducible_across_worker_counts() {
    let args = ["smallball", "--process", "chaos", "--truncation", "5", "--eps", "0.8,0.5", "--samples", "3000", "--steps", "32", "--seed", "9"];
    let a = run(&[&args[..], &["--workers", "1"]].concat());
    let b = run(&[&args[..], &["--workers", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["op"], "smallball");
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
    assert_eq!(doc["params"]["settings"]["samples"], 3000);
    assert!(doc["version"].is_string());
}

#[test]
fn config_file_supplies_defaults() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "seed = 11\nsamples = 500\nsteps = 16\nformat = \"json\"").unwrap();
    let path = f.path().to_str().unwrap();
    let o = run(&["laplace", "--lambda", "1", "--config", path]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["seed"], 11);
    assert_eq!(doc["results"][0]["samples"], 500);
    let o = run(&["laplace", "--lambda", "1", "--config", path, "--seed", "12"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["seed"], 12);
}

#[test]
fn laplace_csv_has_one_row_per_lambda() {
    let o = run(&["laplace", "--lambda", "0,1,5", "--samples", "500", "--steps", "64", "--oracle", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,estimate,stdError,samples,oracle");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.0,1.0,0.0,"));
}

#[test]
fn simulate_dumps_every_grid_point() {
    let o = run(&["simulate", "--process", "levy-area", "--steps", "10"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("time,value"));
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().nth(1).unwrap().starts_with("0.0,0.0"));
}

#[test]
fn spectral_reads_matrix_files() {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    write!(f, "[[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]").unwrap();
    let o = run(&["spectral", "--matrix", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("q_1 = 2.000000000000"));
    assert!(text.contains("one_norm = 6.000000000000"));
}

#[test]
fn quick_acceptance_subset_passes() {
    let o = run(&["verify", "--seed", "42", "--only", "1,2,3,4,8"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert_eq!(text.matches("[PASS]").count(), 5);
}

#[test]
fn lil_demo_carries_its_banner() {
    let o = run(&["lil-demo", "--steps", "2048", "--horizon", "100", "--checkpoints", "3", "--truncation", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("# demonstration only, no pass/fail"));
}

#[test]
fn writes_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = run(&["constants", "--kappa", "--p", "2", "--format", "json", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!((doc["results"][0]["value"].as_f64().unwrap() - 0.125).abs() < 1e-8);
}
