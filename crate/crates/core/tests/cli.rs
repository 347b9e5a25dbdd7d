//! The command-line binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use spinmus::cli::StateFile;
use spinmus::families::gibbs_state;
use spinmus::spin::{build_ops, TwoJ};
use spinmus::uncertainty::{report, UncertaintyReport};

fn spinmus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmus"))
        .args(args)
        .env_remove("SPINMUS_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn write_gibbs(dir: &Path) -> String {
    let path = dir.join("gibbs.json");
    let p = path.to_str().unwrap().to_string();
    let o = spinmus(&["family", "gibbs", "--two-j", "2", "--s-prime", "0.5", "--out", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn family_writes_gibbs_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_gibbs(dir.path());
    let file = StateFile::load(Path::new(&path)).unwrap();
    let rho = file.to_density().unwrap();
    // index 0 is m = −1
    for (a, w) in [1.0, 4.0, 16.0].iter().enumerate() {
        assert!((rho.rho()[(a, a)].re - w / 21.0).abs() < 1e-15);
    }
}

#[test]
fn report_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_gibbs(dir.path());
    let o = spinmus(&["report", &path]);
    assert_eq!(o.status.code(), Some(0));
    let from_cli: UncertaintyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(from_cli.gap.abs() <= 1e-9);
    let ops = build_ops(2).unwrap();
    let in_process = report(&gibbs_state(TwoJ::new(2).unwrap(), 0.5), &ops).unwrap();
    assert_eq!(from_cli, in_process);
}

#[test]
fn report_in_a_rotated_frame() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_gibbs(dir.path());
    let o = spinmus(&["report", &path, "--frame", "0,1,0;0,0,1;1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let r: UncertaintyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.mean_z.abs() < 1e-12);
    let o = spinmus(&["report", &path, "--frame", "1,0,0;1,0,0;0,0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn recurrence_off_condition_is_inconsistent() {
    let args = ["recurrence", "--s", "2", "--t", "0.5", "--u", "1", "--v", "1", "--two-j", "2"];
    let o = spinmus(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["consistent"], serde_json::Value::Bool(false));
    let mut strict = args.to_vec();
    strict.push("--require-consistent");
    assert_eq!(spinmus(&strict).status.code(), Some(1));
    let o = spinmus(&["recurrence", "--s", "-2", "--t", "2", "--u", "0", "--v", "0", "--two-j", "2", "--require-consistent"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn scan_csv_is_deterministic_across_job_counts() {
    let one = spinmus(&["scan", "--two-j", "2", "--jobs", "1"]);
    let four = spinmus(&["scan", "--two-j", "2", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
    let text = stdout(&one);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,t,u,v,consistent,worst_residual,gap"));
    assert_eq!(lines.count(), 441);
}

#[test]
fn scan_accepts_a_custom_grid() {
    let o = spinmus(&["scan", "--two-j", "3", "--grid", "s=2;t=-2,0.5;u=0;v=0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("2.0,-2.0,0.0,0.0,true"));
}

#[test]
fn wick_reports_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_gibbs(dir.path());
    let o = spinmus(&["wick", &path]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["symbol"]["two_j"], 2);
    assert!(v["residual_a"].as_f64().unwrap() < 1e-10);
    assert!(v["residual_b"].as_f64().unwrap() < 1e-10);
}

#[test]
fn limits_tables() {
    let o = spinmus(&["limits", "coherent", "--j-list", "5,10,20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("two_j,fidelity,infidelity"));
    let o = spinmus(&["limits", "schwinger", "--j-list", "0.5,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = spinmus(&["limits", "condition2", "--j-list", "5,10,20", "--s-prime", "1.5", "--alpha=0.5,0.6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("conj_alpha,true,true"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"two_j": 1, "kind": "density", "data": [[[2,0],[0,0]],[[0,0],[-1,0]]]}"#).unwrap();
    let o = spinmus(&["report", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(spinmus(&["family", "intelligent", "--two-j", "3", "--n", "1"]).status.code(), Some(2));
    assert_eq!(spinmus(&["report", "/nonexistent/state.json"]).status.code(), Some(2));
    assert_eq!(spinmus(&["recurrence", "--s", "1"]).status.code(), Some(2));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_spinmus"))
        .args(["recurrence", "--s", "2", "--t", "-2", "--u", "0", "--v", "0", "--two-j", "2"])
        .env("SPINMUS_TOL", "1e-3")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["tolerance"].as_f64().unwrap() >= 1e-3);
    let o = Command::new(env!("CARGO_BIN_EXE_spinmus"))
        .args(["recurrence", "--s", "2", "--t", "-2", "--u", "0", "--v", "0", "--two-j", "2"])
        .env("SPINMUS_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
