use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orlicz-kit"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orlicz-kit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn analyze_constant_on_segment_is_not_compact() {
    let dir = scratch("analyze");
    let space = write(&dir, "space.json", r#"{"segment":{"length":1,"depth":3}}"#);
    let phi = write(&dir, "phi.json", r#"{"family":"power","p":2}"#);
    let u = write(&dir, "u.json", r#"{"segment":1}"#);
    let out = bin()
        .args(["analyze", "--seed", "1", "--space"])
        .arg(&space)
        .arg("--phi")
        .arg(&phi)
        .arg("--u")
        .arg(&u)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["compact"], "not_compact");
    assert_eq!(v["justification"], "nonatomic_mass_in_n_set");
    assert_eq!(v["operator_norm"].as_f64(), Some(1.0));
    assert_eq!(v["invertible"], true);
}

#[test]
fn norm_of_unit_indicator() {
    let dir = scratch("norm");
    let space = write(&dir, "space.json", r#"{"atoms":[{"id":"a","mass":0.25}]}"#);
    let phi = write(&dir, "phi.json", r#"{"family":"power","p":2}"#);
    let f = write(&dir, "f.json", r#"{"atoms":{"a":1}}"#);
    let out = bin().arg("norm").arg("--space").arg(&space).arg("--phi").arg(&phi).arg("--f").arg(&f).output().unwrap();
    assert!(out.status.success());
    let v = json(&out);
    // 1/φ⁻¹(1/μ) = sqrt(0.25)
    assert!((v["luxemburg"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["modular_at_norm"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn conjugate_and_delta2() {
    let dir = scratch("conj");
    let phi = write(&dir, "phi.json", r#"{"family":"power","p":2,"c":0.5}"#);
    let out = bin().args(["conjugate", "--y", "0,1,3", "--phi"]).arg(&phi).output().unwrap();
    assert!(out.status.success());
    let v = json(&out);
    let psi3 = v["values"][2]["psi"].as_f64().unwrap();
    assert!((psi3 - 4.5).abs() < 1e-9, "{psi3}");
    assert_eq!(v["closed_form"]["family"], "power");

    let exp = write(&dir, "exp.json", r#"{"family":"exp_minus"}"#);
    let v = json(&bin().arg("delta2").arg("--phi").arg(&exp).output().unwrap());
    assert_eq!(v["flag"]["verdict"], "fails");
    assert_eq!(v["superlinear"], true);
}

#[test]
fn verify_demo_passes_and_writes_out() {
    let dir = scratch("verify");
    let out_path = dir.join("report.json");
    let out = bin().args(["verify", "--seed", "7", "--out"]).arg(&out_path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["entries"].as_array().unwrap().len(), 19);
}

#[test]
fn harness_spikes_have_unit_norm() {
    let dir = scratch("spikes");
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"space":{"segment":{"length":1,"depth":1}},"phi":{"family":"power","p":2},
            "set":{"depth":1,"cells":[[0,1]]},"nmax":6}"#,
    );
    let out = bin().args(["harness", "spikes", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let norms = v["norms"].as_array().unwrap();
    assert_eq!(norms.len(), 6);
    assert!(norms.iter().all(|n| (n.as_f64().unwrap() - 1.0).abs() < 1e-8));
}

#[test]
fn convergence_hypothesis_violation_exits_2() {
    let dir = scratch("conv");
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"space":{"atoms":[{"id":"a","mass":1},{"id":"b","mass":1}]},"phi":{"family":"power","p":2},
            "tau":{"atoms":{"b":"a"}},"f":{},"sequence":[{"atoms":{"a":0.1}}],"eps":[0.5]}"#,
    );
    let out = bin().args(["harness", "convergence", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
}

#[test]
fn config_errors_exit_3_with_a_path() {
    let dir = scratch("bad");
    let space = write(&dir, "space.json", r#"{"atoms":[{"id":"a","mass":-1}]}"#);
    let phi = write(&dir, "phi.json", r#"{"family":"power","p":2}"#);
    let f = write(&dir, "f.json", r#"{"atoms":{"a":1}}"#);
    let out = bin().arg("norm").arg("--space").arg(&space).arg("--phi").arg(&phi).arg("--f").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("atoms[0].mass"));

    let bad_phi = write(&dir, "bad_phi.json", r#"{"family":"power","p":"two"}"#);
    let out = bin().arg("delta2").arg("--phi").arg(&bad_phi).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("phi"));

    let out = bin().args(["analyze"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}
