use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SMALL: &str = "\
[counts]
group_cases = 50
projective_pairs = 5
projective_points = 5
gauge_points = 200
elements = 2
points = 20
";

fn galgauge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galgauge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, format!("{SMALL}{extra}")).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn passing_suites_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = galgauge(&[
        "all",
        "--suite",
        "group",
        "--suite",
        "rep",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(&out);
    let names: Vec<_> = r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["group", "rep"]);
    assert!(out.join("timings.json").exists());
    assert!(stdout(&o).contains("passing_cocycle_variants = r2_on_a1"));
}

#[test]
fn zero_tolerance_exits_one_and_lists_deviations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[tolerances]\nscale = 0.0\n");
    let out = dir.path().join("out");
    let o = galgauge(&["group-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    for check in report(&out)["suites"][0]["checks"].as_array().unwrap() {
        assert!(text.contains(check["name"].as_str().unwrap()));
    }
    assert!(text.contains("FAIL d_homomorphism"));
}

#[test]
fn literal_covariance_mapping_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = galgauge(&["covariance-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let checks = report(&out)["suites"][0]["checks"].as_array().unwrap().clone();
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, ["gauss_ampere_mapping.maxwell", "gauss_ampere_mapping.quartic"]);
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(galgauge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(galgauge(&[]).status.code(), Some(2));
    assert_eq!(galgauge(&["all", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(galgauge(&["group-check", "--suite", "rep"]).status.code(), Some(2));
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        galgauge(&["group-check", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let bad = write_config(dir.path(), "[model]\nm = -1.0\n");
    assert_eq!(galgauge(&["group-check", "--config", &bad]).status.code(), Some(2));
    let unknown = write_config(dir.path(), "[model]\nmass = 1.0\n");
    assert_eq!(galgauge(&["group-check", "--config", &unknown]).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = galgauge(&[
            "all",
            "--suite",
            "rep",
            "--suite",
            "gauge",
            "--config",
            &cfg,
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        std::fs::read(out.join("report.json")).unwrap()
    };
    let (a, b, c) = (run("a", "7"), run("b", "7"), run("c", "8"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let (a, c): (Value, Value) = (serde_json::from_slice(&a).unwrap(), serde_json::from_slice(&c).unwrap());
    assert_eq!(a["seed"], 7);
    assert_ne!(a["config_hash"], c["config_hash"]);
    let keys = |v: &Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    assert_eq!(keys(&a), keys(&c));
    assert_eq!(keys(&a["suites"][0]), keys(&c["suites"][0]));
}

#[test]
fn printed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = galgauge(&["--print-config", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with('#'));
    assert!(text.contains("seed = 42"));
    let path = dir.path().join("printed.toml");
    std::fs::write(&path, &text).unwrap();
    let again = galgauge(&["--print-config", "--config", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn evolve_writes_csv_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[dynamics]\nn = 128\nextent = 30.0\ndt = 0.01\nsteps = 100\nrecord_every = 10\nnorm_steps = 50\ngauge_n = 64\nfdtd_n = 32\n");
    let out = dir.path().join("out");
    let o = galgauge(&["evolve", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let series = std::fs::read_to_string(out.join("dynamics_series.csv")).unwrap();
    assert_eq!(series.lines().next(), Some("step,time,norm,charge,px,py"));
    assert_eq!(series.lines().count(), 12);
    assert_eq!(
        std::fs::read_to_string(out.join("dynamics_psi.csv"))
            .unwrap()
            .lines()
            .count(),
        129
    );
}
