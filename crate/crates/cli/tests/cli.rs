use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use clickstat_cli::scenario::{preset, Scenario};

fn clickstat(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clickstat"))
        .args(args)
        .env("CLICKSTAT_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

const MINIMAL: &str = r#"{
  "name": "mini",
  "states": [{"kind": "cat", "parity": "odd"}],
  "detector": {"model": "onoff", "bins": 3, "eta": 0.8},
  "criteria": ["counts", "klyshko-integer"],
  "sweep": {"start": 0.1, "stop": 1.0, "points": 4}
}"#;

#[test]
fn minimal_scenario_parses() {
    let s = Scenario::from_json(MINIMAL).unwrap();
    assert_eq!(s.states[0].modes, 1);
    assert_eq!(s.sweep.values().len(), 4);
}

#[test]
fn unknown_fields_are_rejected() {
    let bad = MINIMAL.replace("\"points\": 4", "\"points\": 4, \"step\": 2");
    assert!(Scenario::from_json(&bad).is_err());
    let bad = MINIMAL.replace("\"eta\": 0.8", "\"eta\": 0.8, \"gain\": 1");
    assert!(Scenario::from_json(&bad).is_err());
}

#[test]
fn presets_round_trip_through_json() {
    for name in ["fig1", "fig3", "fig4", "fig5", "fig6"] {
        let s = preset(name).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(Scenario::from_json(&text).unwrap(), s);
    }
}

#[test]
fn sweep_writes_one_file_per_set_and_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mini.json");
    fs::write(&path, MINIMAL).unwrap();
    let out = clickstat(&["sweep", "--scenario", path.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let listed = String::from_utf8(out.stdout).unwrap();
    let files: Vec<&str> = listed.lines().collect();
    assert!(files.iter().any(|f| f.ends_with("mini_integer_counts.csv")), "{files:?}");
    assert!(files.iter().any(|f| f.ends_with("mini_all_klyshko-integer.csv")), "{files:?}");
    let csv = fs::read_to_string(dir.path().join("mini_integer_counts.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("grid_value,"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn json_output_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let out = clickstat(
        &[
            "sweep", "--name", "j", "--model", "pnr", "--bins", "3", "--levels", "2",
            "--points", "3", "--format", "json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let listed = String::from_utf8(out.stdout).unwrap();
    assert!(!listed.is_empty());
    for file in listed.lines() {
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(file).unwrap()).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows[0].get("verdict").is_some());
    }
}

#[test]
fn witness_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = clickstat(&["witness", "--model", "photoelectric", "--eta", "0.5", "--at", "0.5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 2);
    assert!(text.contains("e-"));
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["witness", "--eta", "1.5", "--bins", "3", "--at", "1"][..],
        &["witness", "--model", "onoff", "--at", "1"],
        &["figures", "fig9"],
        &["sweep", "--criteria", "bogus", "--bins", "2"],
    ] {
        let out = clickstat(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let out = clickstat(&["sweep", "--scenario", missing.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sample_round_trips_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "sample", "--name", "s", "--parity", "odd", "--bins", "4", "--eta", "0.8",
        "--sets", "integer", "--at", "0.3", "--shots", "20000", "--seed", "5", "--resamples", "20",
    ];
    let out = clickstat(&base, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let listed = String::from_utf8(out.stdout).unwrap();
    let hist = listed.lines().find(|l| l.ends_with("_histogram.csv")).unwrap().to_string();
    let first = fs::read_to_string(listed.lines().find(|l| l.contains("_sample_")).unwrap()).unwrap();
    let again = clickstat(&base, dir.path());
    assert!(again.status.success());
    let second = fs::read_to_string(listed.lines().find(|l| l.contains("_sample_")).unwrap()).unwrap();
    assert_eq!(first, second);

    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--import", hist.as_str()]);
    let out = clickstat(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
