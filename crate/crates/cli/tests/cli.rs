//! End-to-end checks of the `dmetric` binary: exit codes, file outputs,
//! and determinism of the emitted reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmetric"))
        .args(args)
        .output()
        .expect("spawn dmetric")
}

fn write_config(dir: &Path, value: &serde_json::Value) -> PathBuf {
    let path = dir.join("exp.json");
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn toy_config() -> serde_json::Value {
    serde_json::json!({
        "version": 1,
        "layer_dims": [2, 2],
        "activation": {"kind": "identity"},
        "networks": {
            "w1": [0.8, 1.0, 1.0, 1.0, 0.9, 1.0],
            "w2": [1.0, 1.0, 1.0, 1.0, 1.1, 1.0],
            "w3": [-2.0, 1.0, 1.0, 1.0, -1.9, 1.0]
        },
        "measure": {
            "domain": {"kind": "box", "bounds": [[-3.0, 3.0], [-3.0, 3.0]]},
            "law": "uniform"
        },
        "n_samples": 20000,
        "seed": 42,
        "published_values": {
            "euclidean": [
                [0.0, 0.283, 3.959],
                [0.283, 0.0, 4.243],
                [3.959, 4.243, 0.0]
            ]
        }
    })
}

#[test]
fn tables_writes_report_and_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &toy_config());
    let out_dir = dir.path().join("out");
    let out = dmetric(&[
        "tables",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("published"), "stdout should echo published values");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["networks"], serde_json::json!(["w1", "w2", "w3"]));
    let eu = report["euclidean"]["values"].as_array().unwrap();
    for i in 0..3 {
        assert_eq!(eu[i][i], serde_json::json!(0.0));
        for j in 0..3 {
            assert_eq!(eu[i][j], eu[j][i]);
        }
    }
    let m = &report["measures"][0];
    assert_eq!(m["label"], "uniform");
    let d01 = m["d_mu"][0][1].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&d01));
    // w1 and w3 both have a half-plane, so their oracle entry is a number;
    // w2 decides a constant label, so its entries are null.
    assert!(m["oracle"][0][2].is_f64());
    assert!(m["oracle"][0][1].is_null());
    assert_eq!(report["config"]["seed"], 42);

    let euclid_csv = std::fs::read_to_string(out_dir.join("euclidean.csv")).unwrap();
    assert_eq!(euclid_csv.lines().count(), 1 + 9);
    assert!(euclid_csv.starts_with("net_a,net_b,euclidean,published\n"));
    let dmu_csv = std::fs::read_to_string(out_dir.join("dmu_uniform.csv")).unwrap();
    assert!(dmu_csv.starts_with("net_a,net_b,d_mu,ci95,oracle,published\n"));
    assert_eq!(dmu_csv.lines().count(), 1 + 9);
}

#[test]
fn tables_rejects_single_network() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = toy_config();
    cfg["networks"] = serde_json::json!({"w1": [0.8, 1.0, 1.0, 1.0, 0.9, 1.0]});
    cfg.as_object_mut().unwrap().remove("published_values");
    let config = write_config(dir.path(), &cfg);
    let out = dmetric(&[
        "tables",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn sweep_config(resolution: usize, n_samples: usize) -> serde_json::Value {
    serde_json::json!({
        "version": 1,
        "layer_dims": [2, 2],
        "activation": {"kind": "identity"},
        "networks": {"w1": [0.8, 1.0, 1.0, 1.0, 0.9, 1.0]},
        "measure": {
            "domain": {"kind": "box", "bounds": [[-3.0, 3.0], [-3.0, 3.0]]},
            "law": "uniform"
        },
        "n_samples": n_samples,
        "seed": 7,
        "sweep": {
            "fixed_params": [1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            "free_param_indices": [0, 4],
            "ranges": [[-2.0, 4.0], [-2.0, 4.0]],
            "resolution": resolution,
            "reference": "w1"
        }
    })
}

#[test]
fn sweep_emits_complete_grid() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &sweep_config(5, 10000));
    let csv = dir.path().join("grid.csv");
    let out = dmetric(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p1,p2,d_mu,ci95"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4);
        for f in fields {
            let v: f64 = f.parse().expect("numeric field");
            assert!(v.is_finite());
        }
    }
}

#[test]
fn sweep_requires_sweep_section() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &toy_config());
    let out = dmetric(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("grid.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep"));
}

#[test]
fn probe_reports_neighbors() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &toy_config());
    let out = dmetric(&[
        "probe",
        "--config",
        config.to_str().unwrap(),
        "--center",
        "w1",
        "--radius",
        "1e-3",
        "--neighbors",
        "8",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["center_name"], "w1");
    assert_eq!(report["n_neighbors"], 8);
    let r = &report["result"];
    assert_eq!(r["radius"], serde_json::json!(1e-3));
    assert_eq!(r["argmax_neighbor"].as_array().unwrap().len(), 6);
    let max = r["max_quotient_distance"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&max));
}

#[test]
fn probe_argument_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &toy_config());
    let cfg = config.to_str().unwrap();
    let unknown = dmetric(&["probe", "--config", cfg, "--center", "nope", "--radius", "0.1", "--neighbors", "4"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("nope"));
    let bad_radius = dmetric(&["probe", "--config", cfg, "--center", "w1", "--radius", "-1", "--neighbors", "4"]);
    assert_eq!(bad_radius.status.code(), Some(2));
    let no_neighbors = dmetric(&["probe", "--config", cfg, "--center", "w1", "--radius", "0.1", "--neighbors", "0"]);
    assert_eq!(no_neighbors.status.code(), Some(2));
}

#[test]
fn kappa_prints_bound_and_margin() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &toy_config());
    let out = dmetric(&["kappa", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("measure uniform: kappa = 2.7777777777777776e-2"));
    assert!(stdout.contains("violations = 0"));
}

#[test]
fn seed_override_controls_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = toy_config();
    cfg.as_object_mut().unwrap().remove("published_values");
    let config = write_config(dir.path(), &cfg);
    let cfg = config.to_str().unwrap();
    let run = |seed: &str, out: &str| {
        let out_dir = dir.path().join(out);
        let r = dmetric(&["--seed", seed, "tables", "--config", cfg, "--out", out_dir.to_str().unwrap()]);
        assert!(r.status.success());
        std::fs::read(out_dir.join("report.json")).unwrap()
    };
    let a = run("1", "a");
    let b = run("1", "b");
    let c = run("2", "c");
    assert_eq!(a, b, "same seed must give byte-identical reports");
    assert_ne!(a, c, "different seed must move the estimates");
}

#[test]
fn malformed_config_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"version\": 1,\n  \"layer_dims\": [2 2]\n}").unwrap();
    let out = dmetric(&["kappa", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line"), "stderr: {stderr}");
}
