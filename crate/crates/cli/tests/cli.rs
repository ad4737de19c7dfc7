//! End-to-end runs of the compiled binary against small configurations.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_obstacle-lab")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary launches")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Interior parabola on a 65 x 65 grid; fast to solve, has a contact line.
fn pinch_config(dir: &Path) -> String {
    write_config(
        dir,
        "pinch.json",
        r#"{
            "dim": 2,
            "box": [[-1.0, 1.0], [-1.0, 1.0]],
            "h": 0.03125,
            "boundary": "0.5 * x1^2",
            "radii": [0.5, 0.25],
            "tol": 1e-10
        }"#,
    )
}

#[test]
fn solve_elliptic_writes_solution_stats_and_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = pinch_config(dir.path());
    let out = dir.path().join("run");
    let res = run(&["solve-elliptic", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));

    for name in ["solution.snap", "stats.json", "fb.csv", "mask.snap", "manifest.json"] {
        assert!(out.join(name).exists(), "{} missing", name);
    }
    let stats = read_json(&out.join("stats.json"));
    assert!(stats["iterations"].as_u64().unwrap() > 0);
    assert!(stats["final_residual"].as_f64().unwrap() <= 1e-10);
    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["command"], "solve-elliptic");
    assert_eq!(manifest["config"]["dim"], 2);
    // The contact line of the parabola produces free-boundary rows.
    let fb = std::fs::read_to_string(out.join("fb.csv")).unwrap();
    assert!(fb.lines().count() > 10);
    assert_eq!(fb.lines().next().unwrap().split(',').count(), 2);
}

#[test]
fn classify_reports_the_singular_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = pinch_config(dir.path());
    let out = dir.path().join("run");
    let res = run(&[
        "classify",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--point",
        "0,0.25",
        "--point",
        "0.9,0.9",
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));

    let reports = read_json(&out.join("classify.json"));
    let arr = reports.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["verdict"], "Singular");
    assert_eq!(arr[0]["stratum"], 1);
    // (0.9, 0.9) is far off the contact set: value guard rejects it.
    assert!(arr[1]["error"].as_str().unwrap().contains("not a free-boundary point"));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("Singular"));
}

#[test]
fn monneau_and_growth_emit_curves() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = pinch_config(dir.path());

    let m_out = dir.path().join("monneau-run");
    let res = run(&[
        "monneau",
        "--config",
        &cfg,
        "--out",
        m_out.to_str().unwrap(),
        "--point",
        "0,0.25",
        "--matrix",
        "1,0,0",
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let csv = std::fs::read_to_string(m_out.join("monneau.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2); // both configured radii admissible
    let header = read_json(&m_out.join("monneau.json"));
    assert_eq!(header["m"], 256);
    assert_eq!(header["monotone"], true);

    let g_out = dir.path().join("growth-run");
    let res = run(&[
        "growth",
        "--config",
        &cfg,
        "--out",
        g_out.to_str().unwrap(),
        "--point",
        "0,0.25",
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let csv = std::fs::read_to_string(g_out.join("growth_0.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    for line in csv.lines() {
        let ratio: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.01..=10.0).contains(&ratio));
    }
}

#[test]
fn parabolic_run_stores_a_loadable_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "melt.json",
        r#"{
            "dim": 2,
            "box": [[-1.0, 1.0], [-1.0, 1.0]],
            "h": 0.0625,
            "boundary": "t",
            "tau": 0.05,
            "T": 0.2,
            "tol": 1e-9
        }"#,
    );
    let out = dir.path().join("run");
    let res = run(&["solve-parabolic", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));

    let traj_dir = out.join("trajectory");
    let manifest = read_json(&traj_dir.join("manifest.json"));
    let times = manifest["times"].as_array().unwrap();
    assert_eq!(times.len(), 5); // t = 0, 0.05, ..., 0.2
    assert_eq!(manifest["tau"], 0.05);
    for k in 0..times.len() {
        assert!(traj_dir.join(format!("{:06}.snap", k)).exists());
    }
    let stats = read_json(&out.join("stats.json"));
    let arr = stats.as_array().unwrap();
    assert_eq!(arr.len(), 5);
    assert!(arr[0].is_null()); // initial level is not a solve
    assert!(arr[1]["iterations"].as_u64().unwrap() > 0);
}

#[test]
fn sweep_and_stefan_produce_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = pinch_config(dir.path());
    let s_out = dir.path().join("sweep-run");
    let res = run(&[
        "schaeffer-sweep",
        "--config",
        &cfg,
        "--out",
        s_out.to_str().unwrap(),
        "--t-min",
        "-0.1",
        "--t-max",
        "0.1",
        "--count",
        "3",
    ]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let sweep = read_json(&s_out.join("sweep.json"));
    let records = sweep["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    // The middle shift is t = 0: the unshifted parabola keeps its singular line.
    assert_eq!(records[1]["t"], 0.0);
    assert!(records[1]["singular"].as_u64().unwrap() > 0);
    // t = +0.1 lifts the solution off the obstacle entirely.
    assert_eq!(records[2]["fb_count"], 0);

    let t_out = dir.path().join("stefan-run");
    let melt = write_config(
        dir.path(),
        "stefan.json",
        r#"{
            "dim": 2,
            "box": [[-1.0, 1.0], [-1.0, 1.0]],
            "h": 0.0625,
            "boundary": "t",
            "tau": 0.05,
            "T": 0.15,
            "radii": [0.5, 0.25],
            "tol": 1e-9
        }"#,
    );
    let res = run(&["stefan", "--config", &melt, "--out", t_out.to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let report = read_json(&t_out.join("stefan.json"));
    assert_eq!(report["records"].as_array().unwrap().len(), 4);
    assert!(t_out.join("trajectory").join("manifest.json").exists());
}

#[test]
fn bad_inputs_fail_with_context() {
    let dir = tempfile::tempdir().unwrap();

    // Config with an unknown key.
    let bad = write_config(
        dir.path(),
        "bad.json",
        r#"{"dim": 2, "box": [[-1,1],[-1,1]], "h": 0.5, "boundary": "0", "seed": 1}"#,
    );
    let out = dir.path().join("run");
    let res = run(&["solve-elliptic", "--config", &bad, "--out", out.to_str().unwrap()]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("config"));

    // Point with the wrong arity.
    let cfg = pinch_config(dir.path());
    let res = run(&[
        "classify",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--point",
        "0.5",
    ]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("coordinates"));
}
