use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use freesurf::{parse_config, RunSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_freesurf"))
}

fn solve_config(dir: &Path, lambda: f64, amplitude: f64, n: usize) -> PathBuf {
    let text = format!(
        "command = solve\n\n[profile]\nkind = water-wave\ng = 1\nlambda = {lambda}\n\n[domain]\nC = 1\n\
         P = 6.283185307179586\n\n[numerics]\nN = {n}\namplitude = {amplitude}\nsteps = 4\n\n[output]\ndir = out\n"
    );
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn as_f64(v: &Value) -> f64 {
    v.to_string().parse().unwrap()
}

#[test]
fn flat_solve_reports_the_closed_form_margin() {
    let dir = TempDir::new().unwrap();
    let cfg = solve_config(dir.path(), 4.0, 0.0, 64);
    let status = bin().args(["solve", "--config"]).arg(&cfg).output().unwrap().status;
    assert_eq!(status.code(), Some(0));
    let out = dir.path().join("out");
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["graph_property"], Value::Bool(true));
    assert_eq!(report["certified"], Value::Bool(true));
    // a*sqrt(4 - 2a) = 1 on the upper branch, and the margin is g/h(a)^3 = a^3.
    let sol = read_json(&out.join("solution.json"));
    let a = 1.8546377;
    assert!((as_f64(&report["czam_margin"]) - a * a * a).abs() < 1e-5);
    assert_eq!(sol["N"], Value::from(64));
    assert_eq!(sol["branch"], Value::from("upper"));
    let csv = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,u,v,theta,abs_wprime"));
    assert_eq!(lines.count(), 65);
}

#[test]
fn solved_curve_verifies_through_the_csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let cfg = solve_config(dir.path(), 3.0241, 0.02, 128);
    assert_eq!(bin().args(["solve", "--config"]).arg(&cfg).output().unwrap().status.code(), Some(0));
    let lambda = read_json(&dir.path().join("out/solution.json"))["lambda"].to_string();
    let out = dir.path().join("verify");
    let status = bin()
        .args(["verify", "--curve"])
        .arg(dir.path().join("out/solution.csv"))
        .arg("--profile")
        .arg(format!("water-wave:g=1,lambda={lambda}"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["graph_property"], Value::Bool(true));
    assert_eq!(report["self_intersects"], Value::Bool(false));
    assert_eq!(report["source"], Value::from("curve"));
    assert_eq!(report["sampling"]["sample_count"], Value::from(128));
}

#[test]
fn overturning_curve_exits_three() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("t,u,v\n");
    for i in 0..=64 {
        let t = std::f64::consts::TAU * f64::from(i) / 64.0;
        text += &format!("{t},{},{}\n", t - 1.5 * t.sin(), 1.0 + 0.2 * t.cos());
    }
    let curve = dir.path().join("loop.csv");
    std::fs::write(&curve, text).unwrap();
    let out = dir.path().join("r");
    let status = bin()
        .args(["verify", "--curve"])
        .arg(&curve)
        .args(["--profile", "water-wave:g=1,lambda=8", "--out"])
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(3));
    let report = read_json(&out.join("report.json"));
    assert!(as_f64(&report["min_cos_theta"]) < 0.0);
    assert_eq!(report["graph_property"], Value::Bool(false));
    let failures: Vec<&str> = report["failures"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failures.contains(&"graph"));
}

#[test]
fn reciprocal_table_fails_profile_check() {
    let dir = TempDir::new().unwrap();
    let mut table = String::from("Y,h\n");
    for i in 1..=200 {
        let y = 0.5 + f64::from(i) * 0.01;
        table += &format!("{y},{}\n", 1.0 / y);
    }
    let path = dir.path().join("recip.csv");
    std::fs::write(&path, table).unwrap();
    let out = dir.path().join("pc");
    let status = bin()
        .args(["profile-check", "--profile"])
        .arg(format!("table:{}", path.display()))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(3));
    let r = read_json(&out.join("hypotheses.json"));
    assert_eq!(r["overall"], Value::Bool(false));
    assert!(r["failed_clauses"].as_array().unwrap().contains(&Value::from("a")));
}

#[test]
fn water_wave_profile_check_prints_and_passes() {
    let out = bin().args(["profile-check", "--profile", "water-wave:g=1,lambda=4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["overall"], Value::Bool(true));
}

#[test]
fn bad_configs_exit_four() {
    let dir = TempDir::new().unwrap();
    let cfg = solve_config(dir.path(), 4.0, 0.0, 64);
    let text = std::fs::read_to_string(&cfg).unwrap().replace("steps = 4", "steps = 4\nspeling = 1");
    std::fs::write(&cfg, text).unwrap();
    let out = bin().args(["solve", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("speling") && err.contains("line 16"), "{err}");

    let missing = bin().args(["solve", "--config"]).arg(dir.path().join("nope.cfg")).output().unwrap().status;
    assert_eq!(missing.code(), Some(4));
}

#[test]
fn missing_stream_exits_two() {
    // Below the critical head 3 (g C)^{2/3} there is no uniform stream.
    let dir = TempDir::new().unwrap();
    let cfg = solve_config(dir.path(), 2.5, 0.01, 64);
    assert_eq!(bin().args(["solve", "--config"]).arg(&cfg).output().unwrap().status.code(), Some(2));
}

#[test]
fn kernel_eval_writes_the_extension() {
    let dir = TempDir::new().unwrap();
    let text = "command = kernel-eval\n[profile]\nkind = water-wave\ng = 1\nlambda = 4\n[domain]\nC = 0.8\n\
                P = 6.283185307179586\n[numerics]\nN = 64\ngrid_nx = 8\ngrid_ny = 5\nkernel_parity = odd\n\
                kernel_mode = 2\n[output]\ndir = k\n";
    let cfg = dir.path().join("k.cfg");
    std::fs::write(&cfg, text).unwrap();
    assert_eq!(bin().args(["kernel-eval", "--config"]).arg(&cfg).output().unwrap().status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("k/kernel.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 40);
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        let exact = (2.0 * v[0]).cos() * (2.0 * v[1]).sinh() / (1.6f64).sinh();
        assert!((v[2] - exact).abs() < 1e-8);
    }
}

#[test]
fn config_command_must_match_subcommand() {
    let dir = TempDir::new().unwrap();
    let cfg = solve_config(dir.path(), 4.0, 0.0, 64);
    assert_eq!(bin().args(["kernel-eval", "--config"]).arg(&cfg).output().unwrap().status.code(), Some(4));
}

#[test]
fn parse_serialize_parse_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("t.csv");
    std::fs::write(&table, "Y,h\n0,2\n1,1\n2,0\n").unwrap();
    let texts = [
        std::fs::read_to_string(solve_config(dir.path(), 3.0241, 0.001, 128)).unwrap(),
        format!(
            "command = profile-check\n[profile]\nkind = table\npath = {}\n[domain]\nC = 0.5\nP = 3\n\
             [numerics]\nN = 256\nbranch = supercritical\nhypothesis_samples = 1024\n[output]\ndir = x\n",
            table.display()
        ),
    ];
    for text in texts {
        let once: RunSpec = parse_config(&text).unwrap();
        let twice = parse_config(&once.serialize()).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.serialize(), twice.serialize());
    }
}
