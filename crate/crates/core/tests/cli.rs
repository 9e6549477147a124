use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn modman(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modman"))
        .args(args)
        .current_dir(dir)
        .env("MODMAN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.json", r#"{"n": 2, "re": [[0.5, 0], [0, 0.5]]}"#);
    write(dir.path(), "t.json", r#"{"n": 2, "re": [[0.75, 0], [0, 0.25]]}"#);
    write(
        dir.path(),
        "model.json",
        r#"{"rho": {"n": 2, "re": [[0.5, 0], [0, 0.5]]}, "generators": [{"n": 2, "re": [[1, 0], [0, -1]]}]}"#,
    );
    write(
        dir.path(),
        "model3.json",
        r#"{"rho": {"n": 3, "re": [[0.5, 0.1, 0], [0.1, 0.3, 0], [0, 0, 0.2]]},
            "generators": [{"n": 3, "re": [[1, 0, 0], [0, 0, 0], [0, 0, -1]]},
                           {"n": 3, "re": [[0, 1, 0], [1, 0, 0], [0, 0, 0]], "im": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}],
            "orthonormalize": true}"#,
    );
    dir
}

#[test]
fn divergence_of_the_diagonal_pair() {
    let dir = fixtures();
    let out = modman(&["divergence", "--sigma", "s.json", "--tau", "t.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let d = v["divergence"].as_f64().unwrap();
    assert!((d - 0.1438410).abs() < 5e-8);
    assert!((d - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-12);
    for key in ["araki", "umegaki", "dual_form"] {
        assert!((v[key].as_f64().unwrap() - d).abs() < 1e-12);
    }
}

#[test]
fn solve_at_zero_and_at_one_half() {
    let dir = fixtures();
    let out = modman(&["solve", "--model", "model.json", "--eta", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["theta"], serde_json::json!([0.0]));

    let out = modman(&["solve", "--model", "model.json", "--eta", "0.5"], dir.path());
    let theta = json(&out)["theta"][0].as_f64().unwrap();
    assert!((theta - 0.5f64.atanh()).abs() < 1e-9);

    let out = modman(&["solve", "--model", "model3.json", "--eta", "0,0"], dir.path());
    let v = json(&out);
    assert!(v["theta"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap().abs() < 1e-12));
}

#[test]
fn verify_dim4_seed7_passes() {
    let dir = fixtures();
    let out = modman(&["verify", "--dim", "4", "--seed", "7", "--trials", "50"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["all_pass"], Value::Bool(true));
    assert_eq!(v["seed"], 7);
    assert!(v["generator"].as_str().unwrap().contains("Pcg64"));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["anchor"] == "arcs.prop.d-legendre"));
    for c in checks {
        assert!(c["max_residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn verify_failure_exits_one() {
    let dir = fixtures();
    let out = modman(&["verify", "--dim", "2", "--trials", "2", "--tol", "divergence.three-way=1e-300"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["all_pass"], Value::Bool(false));
}

#[test]
fn output_is_byte_deterministic() {
    let dir = fixtures();
    let args = ["verify", "--dim", "3", "--seed", "11", "--trials", "10"];
    let a = modman(&args, dir.path());
    let b = Command::new(env!("CARGO_BIN_EXE_modman"))
        .args(args)
        .env("MODMAN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);

    let arc = ["arc", "--dim", "5", "--seed", "3", "--format", "csv"];
    assert_eq!(modman(&arc, dir.path()).stdout, modman(&arc, dir.path()).stdout);
}

#[test]
fn input_errors_exit_two() {
    let dir = fixtures();
    write(dir.path(), "bad.json", r#"{"n": 2, "re": [[0.5, 0.3], [0, 0.5]]}"#);
    write(dir.path(), "singular.json", r#"{"n": 2, "re": [[1, 0], [0, 0]]}"#);
    write(dir.path(), "garbage.json", "{not json");
    for args in [
        vec!["divergence", "--sigma", "bad.json", "--tau", "t.json"],
        vec!["divergence", "--sigma", "singular.json", "--tau", "t.json"],
        vec!["divergence", "--sigma", "garbage.json", "--tau", "t.json"],
        vec!["divergence", "--sigma", "missing.json", "--tau", "t.json"],
        vec!["verify", "--dim", "1"],
        vec!["verify", "--dim", "65"],
        vec!["verify", "--tol", "-1"],
        vec!["solve", "--model", "model.json", "--eta", "0,0"],
        vec!["frobnicate"],
    ] {
        let out = modman(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unattainable_target_is_reported() {
    let dir = fixtures();
    let out = modman(&["solve", "--model", "model.json", "--eta", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not attained"));
}

#[test]
fn tables_and_out_file() {
    let dir = fixtures();
    let out = modman(
        &["geodesic", "--model", "model3.json", "--to", "0.4,-0.3", "--kind", "m", "--steps", "4", "--format", "csv", "--out", "g.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "t,quantity,value");
    assert_eq!(lines.len(), 1 + 5 * 3);
    let eta0: Vec<f64> = lines[1..]
        .iter()
        .filter(|l| l.split(',').nth(1) == Some("eta.0"))
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    for w in eta0.windows(3) {
        assert!((w[0] - 2.0 * w[1] + w[2]).abs() < 1e-12);
    }

    let out = modman(&["arc", "--dim", "3", "--t-min", "-1", "--steps", "4"], dir.path());
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 5 * 4);
    let zeta_at_zero = rows.iter().find(|r| r["t"] == 0.0 && r["quantity"] == "zeta").unwrap();
    assert_eq!(zeta_at_zero["value"], 0.0);
}

#[test]
fn metric_and_kms_commands() {
    let dir = fixtures();
    let v = json(&modman(&["metric", "--dim", "4", "--seed", "2"], dir.path()));
    let km = v["km_inner"].as_f64().unwrap();
    assert!((v["quadrature"].as_f64().unwrap() - km).abs() < 1e-10);
    assert!((v["t_operator"].as_f64().unwrap() - km).abs() < 1e-10);
    assert!((v["eguchi"].as_f64().unwrap() - km).abs() < 1e-5);

    let v = json(&modman(&["kms", "--dim", "5", "--t", "0.3"], dir.path()));
    assert!(v["residual"].as_f64().unwrap() < 1e-10);

    let out = modman(&["model", "--model", "model3.json", "--theta", "0,0", "--format", "csv"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("quantity,value\n"));
    let entry = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.split(',').next() == Some(key)).unwrap();
        line.split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!((entry("metric.0.0") - 1.0).abs() < 1e-12);
    assert!(entry("metric.0.1").abs() < 1e-12);
    assert!((entry("metric.1.1") - 1.0).abs() < 1e-12);
}
