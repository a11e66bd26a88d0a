//! End-to-end runs of the `coxwalk` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_334(dir: &Path, horizon: usize, trajectories: usize) -> PathBuf {
    let text = fs::read_to_string(config("triangle_334.toml"))
        .unwrap()
        .replace("horizon = 2000", &format!("horizon = {horizon}"))
        .replace("trajectories = 1000", &format!("trajectories = {trajectories}"));
    let p = dir.join("small.toml");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn automaton_summary_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("triangle_334.toml");
    let o = run(&["automaton", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--dot"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("18 states"), "{s}");
    assert!(s.contains("strongly connected: yes"), "{s}");
    for f in ["automaton.json", "automaton_report.json", "automaton.dot"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let dot = fs::read_to_string(dir.path().join("automaton.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("automaton.json")).unwrap()).unwrap();
    assert_eq!(json["num_states"], 18);
}

#[test]
fn kernel_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("triangle_334.toml");
    let o = run(&["kernel", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "1"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("source,target,probability"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.contains(&"1,e,1/6"), "{csv}");
    assert_eq!(fs::read_to_string(dir.path().join("kernel.csv")).unwrap(), csv);
}

#[test]
fn feasibility_verdicts() {
    let o = run(&["feasibility", "8", "3", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("NoCompatibleParameters"));
    let o = run(&["feasibility", "--all"]);
    assert!(stdout(&o).contains("24 feasible"));
    let o = run(&["feasibility", "3", "3", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn affine_walks_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("affine_442.toml");
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--allow-non-fuchsian"));
    let o = run(&["automaton", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("strongly connected: no"));
}

#[test]
fn too_short_runs_report_insufficient_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_334(dir.path(), 30, 2);
    let o = run(&["estimate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(6), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    fs::write(&p, "[system]\nmatrix = [[1, 3], [3, 1]]\nunknown = 1\n").unwrap();
    let o = run(&["automaton", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn echoed_config_reproduces_the_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_334(dir.path(), 600, 60);
    let first = dir.path().join("first");
    let o = run(&["estimate", "--config", cfg.to_str().unwrap(), "--out", first.to_str().unwrap(), "--seed", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(first.join("estimates.json")).unwrap()).unwrap();
    let echo = dir.path().join("echo.toml");
    fs::write(&echo, report["config_echo"].as_str().unwrap()).unwrap();
    let second = dir.path().join("second");
    let o2 = run(&["estimate", "--config", echo.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o2.status.success());
    assert_eq!(stdout(&o), stdout(&o2));
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_334(dir.path(), 50, 4);
    let o = run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--words"]);
    assert!(o.status.success());
    let ends = fs::read_to_string(dir.path().join("endpoints.csv")).unwrap();
    assert_eq!(ends.lines().count(), 5);
    let t = fs::read_to_string(dir.path().join("trajectory_0000.csv")).unwrap();
    assert!(t.starts_with("step,length,cone_type,nf_word"));
    assert_eq!(t.lines().count(), 52);
}
