use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn isospec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isospec"))
        .args(args)
        .env("ISOSPEC_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn certify_default_pair_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = isospec(&[
        "certify",
        "--t",
        "1.5707963267948966",
        "--tprime",
        "0.7853981633974483",
        "--samples",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let cert = read_json(&out);
    assert_eq!(cert["verdict"], "pass");
    assert_eq!(cert["config"]["samples"], 20);
    let checks = cert["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["id"] == "pair.isospectral" && c["status"] == "pass"));
    assert!(checks
        .iter()
        .filter(|c| c["id"].as_str().unwrap().starts_with("heatprobe."))
        .all(|c| c["status"] == "skipped" && c["residual"].is_null()));
}

#[test]
fn certify_prints_to_stdout_without_out() {
    let o = isospec(&["certify", "--t", "1.2", "--tprime", "0.4", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["verdict"], "pass");
}

#[test]
fn equal_parameters_exit_two() {
    let o = isospec(&["certify", "--t", "1.0", "--tprime", "1.0", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let cert: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["verdict"], "fail");
}

#[test]
fn config_errors_exit_three() {
    for args in [
        vec!["certify", "--t", "1.0"],
        vec!["certify", "--t", "1.0", "--tprime", "0.5", "--n", "3"],
        vec![
            "certify", "--t", "1.0", "--tprime", "0.5", "--mu", "1,0;0,0",
        ],
        vec!["certify", "--t", "1.0", "--tprime", "0.5", "--mu", "1"],
        vec!["certify", "--config", "/nonexistent/config.json"],
    ] {
        let o = isospec(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_isospec"))
        .args(["certify", "--t", "1", "--tprime", "0.5"])
        .env("ISOSPEC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"t": 1.0, "tprime": 0.5, "samples": 7, "seed": 3}"#,
    )
    .unwrap();
    let o = isospec(&["certify", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["config"]["samples"], 7);
    assert_eq!(cert["config"]["seed"], 9);
    assert_eq!(cert["config"]["t"], 1.0);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"t": 1.0, "tprime": 0.5, "sample": 7}"#).unwrap();
    let o = isospec(&["certify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn certificates_are_deterministic() {
    let run = || {
        let o = isospec(&[
            "certify",
            "--t",
            "1.1",
            "--tprime",
            "0.3",
            "--samples",
            "10",
            "--seed",
            "5",
        ]);
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["timestamp"] = Value::Null;
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn family_emit_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(
        isospec(&["family", "emit", "--t", "0.5", "--out", a.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        isospec(&[
            "family",
            "emit",
            "--t",
            "-1.0",
            "--out",
            b.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    let file = read_json(&a);
    assert_eq!(file["m"], 3);

    let o = isospec(&[
        "jmap",
        "verify",
        a.to_str().unwrap(),
        "--against",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["generic"], true);
    assert_eq!(rep["against"]["isospectral"], true);
    let expected = 1038.0 + 108.0 * 0.5f64.cos().powi(2);
    assert!((rep["obstruction"].as_f64().unwrap() - expected).abs() < 1e-9);
}

#[test]
fn verify_rejects_non_isospectral_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    isospec(&["family", "emit", "--t", "0.5", "--out", a.to_str().unwrap()]);
    // Scaling jZ2 changes the spectrum of j(Z2).
    let mut v = read_json(&a);
    scale(&mut v["jZ2"]["re"], 2.0);
    scale(&mut v["jZ2"]["im"], 2.0);
    std::fs::write(&b, v.to_string()).unwrap();
    let o = isospec(&[
        "jmap",
        "verify",
        a.to_str().unwrap(),
        "--against",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(&b, r#"{"m": 3, "jZ1": []}"#).unwrap();
    let o = isospec(&["jmap", "verify", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

fn scale(v: &mut Value, s: f64) {
    match v {
        Value::Number(x) => *v = Value::from(x.as_f64().unwrap() * s),
        Value::Array(a) => a.iter_mut().for_each(|x| scale(x, s)),
        _ => {}
    }
}

#[test]
fn padded_family_emits_requested_size() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let o = isospec(&[
        "family",
        "emit",
        "--t",
        "0.5",
        "--m",
        "4",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(&a)["m"], 4);
    let o = isospec(&[
        "family",
        "emit",
        "--t",
        "0.5",
        "--m",
        "2",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn heatprobe_dump_writes_both_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curv.csv");
    let o = isospec(&[
        "certify",
        "--t",
        "1.5707963267948966",
        "--tprime",
        "0.7853981633974483",
        "--samples",
        "5",
        "--heatprobe",
        "--mc-samples",
        "40",
        "--dump-curvature",
        csv.to_str().unwrap(),
    ]);
    let cert: Value = serde_json::from_slice(&o.stdout).unwrap();
    let dump = cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "heatprobe.csv_dump")
        .unwrap();
    assert_eq!(dump["status"], "pass");
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("x0,") && header.ends_with(",scal,det"));
    assert_eq!(text.lines().count(), 41);
    assert!(dir.path().join("curv.tprime.csv").exists());
}
