use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ghm(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghm"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn vexp_reports_four_betas() {
    let dir = tempfile::tempdir().unwrap();
    let out = ghm(
        &["vexp", "--family", "n=3,lambda=0.35", "--mu", "0.25", "--nmax", "4"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path().join("expansion_report.json"));
    assert_eq!(report["beta_sequence"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("coverage.json").exists());
    assert!(dir.path().join("expansion_field.csv").exists());
    assert_eq!(json(dir.path().join("config.json"))["command"], "vexp");
}

#[test]
fn attractor_writes_two_frames() {
    let dir = tempfile::tempdir().unwrap();
    let out = ghm(
        &[
            "attractor",
            "--family",
            "n=3,lambda=0.35",
            "--points",
            "2e4",
            "--steps",
            "1,15",
            "--grid",
            "32",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for step in [1, 15] {
        let svg = std::fs::read_to_string(dir.path().join(format!("snapshot_{step}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<circle"));
    }
}

#[test]
fn broken_spec_names_ghm1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("broken.json");
    std::fs::write(
        &spec,
        r#"{ "k": 0.5, "lambda": 1.5, "branches": [
            { "id": 1, "domain_x": [0.0, 0.6], "linear": [[1.6666666666666667, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0] },
            { "id": 2, "domain_x": [0.5, 1.0], "linear": [[2.0, 0.0], [0.0, 0.5]], "translation": [-1.0, 0.5] } ] }"#,
    )
    .unwrap();
    let out_dir = dir.path().join("run");
    let out = ghm(&["validate", "--spec", spec.to_str().unwrap()], &out_dir);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(out_dir.join("error.json"))["kind"], "GHM1");
}

#[test]
fn non_hyperbolic_maps_exit_nonzero_with_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("flat.json");
    std::fs::write(
        &spec,
        r#"{ "k": 0.5, "lambda": 1.5, "branches": [
            { "id": 1, "domain_x": [0.0, 1.0], "linear": [[1.0, 0.0], [0.0, 1.0]], "translation": [0.0, 0.0] } ] }"#,
    )
    .unwrap();
    let out = ghm(
        &["validate", "--spec", spec.to_str().unwrap(), "--samples", "100"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(dir.path().join("error.json"))["kind"], "not_hyperbolic");
    assert!(
        json(dir.path().join("cone_report.json"))["h2_violations"]
            .as_u64()
            .unwrap()
            > 0
    );
}

fn same_files(a: &Path, b: &Path, names: &[&str]) {
    for name in names {
        let (x, y) = (
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
        );
        assert!(x == y, "{name} differs");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs_and_threads() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["density", "--family", "n=3,lambda=0.35", "--grid", "16", "--seed", "7"];
    let one: Vec<&str> = args.iter().copied().chain(["--threads", "1"]).collect();
    let four: Vec<&str> = args.iter().copied().chain(["--threads", "4"]).collect();
    assert!(ghm(&one, a.path()).status.success());
    assert!(ghm(&four, b.path()).status.success());
    same_files(a.path(), b.path(), &["density.csv", "ulam.csv", "density.json"]);

    let (c, d) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cloud = [
        "attractor",
        "--points",
        "5000",
        "--grid",
        "16",
        "--depth",
        "4",
        "--seed",
        "3",
    ];
    assert!(ghm(&cloud, c.path()).status.success());
    assert!(ghm(&cloud, d.path()).status.success());
    same_files(
        c.path(),
        d.path(),
        &["snapshot_1.csv", "snapshot_15.csv", "cells.csv", "attractor.json"],
    );
}

#[test]
fn config_echo_reruns_the_job() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = ghm(
        &[
            "gap",
            "--family",
            "n=2,lambda=0.5,angle_scale=0,layout=stack,k=0.5",
            "--grid",
            "8",
        ],
        a.path(),
    );
    assert!(first.status.success());
    let config = a.path().join("config.json");
    let again = ghm(&["--config", config.to_str().unwrap()], b.path());
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    same_files(a.path(), b.path(), &["spectral_report.json"]);
}

#[test]
fn remaining_subcommands_run() {
    let cases: [&[&str]; 4] = [
        &["strips", "--depth", "3", "--render"],
        &["strips", "--word", "1,3,2"],
        &["manifolds", "--depth", "6"],
        &[
            "stats",
            "--family",
            "n=2,lambda=0.5,angle_scale=0,layout=stack,k=0.5",
            "--orbit-len",
            "2e5",
            "--samples",
            "200",
        ],
    ];
    for args in cases {
        let dir = tempfile::tempdir().unwrap();
        let out = ghm(args, dir.path());
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn bad_family_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ghm(&["gap", "--family", "n=3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
