//! End-to-end runs of the `brwlab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn brwlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brwlab")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&read(dir, "manifest.json")).unwrap()
}

/// Every file in the directory except the manifest is listed in it, and vice versa.
fn assert_manifest_complete(dir: &Path) {
    let m = manifest(dir);
    let mut listed: Vec<String> = m["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    let mut present: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.json")
        .collect();
    listed.sort();
    present.sort();
    assert_eq!(listed, present);
}

#[test]
fn params_prints_json_and_rejects_bad_rates() {
    let ok = brwlab(&["params", "--q-plus", "1", "--q-minus", "4", "--beta", "0.5"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["derived"]["beta_c"], 0.5);
    assert_eq!(v["derived"]["regime"], "critical");

    assert_eq!(code(&brwlab(&["params", "--q-plus", "4", "--q-minus", "1", "--beta", "1"])), 2);
    assert_eq!(code(&brwlab(&["params", "--q-plus", "1", "--q-minus", "4"])), 2);
    assert_eq!(code(&brwlab(&["no-such-command"])), 2);
    assert_eq!(code(&brwlab(&["--help"])), 0);
}

#[test]
fn simulate_reruns_byte_identically_from_its_manifest() {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("first");
    let second = tmp.path().join("second");
    let o = brwlab(&[
        "simulate", "--q-plus", "1", "--q-minus", "4", "--beta", "0.5", "--quantity", "means", "--phis", "0,0.5",
        "--reps", "500", "--seed", "11", "--out-dir", first.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_manifest_complete(&first);
    let m = manifest(&first);
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["seed"], 11);

    let o = brwlab(&["--config", first.join("manifest.json").to_str().unwrap(), "--out-dir", second.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&first, "estimates.csv"), read(&second, "estimates.csv"));
    assert!(read(&first, "estimates.csv").lines().count() >= 3);
}

#[test]
fn portrait_writes_every_listed_file() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let o = brwlab(&["portrait", "--paper-figure", "crit", "--grid", "2", "--out-dir", dir.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_manifest_complete(&a);
    for name in ["curve_hpm.csv", "curve_hmp.csv", "segment.csv", "portrait.json", "fan_1_1_forward.csv"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    // the SVGs differ only in the timestamp comment
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("<!--")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(read(&a, "portrait.svg")), strip(read(&b, "portrait.svg")));

    let clash = brwlab(&["portrait", "--paper-figure", "super", "--beta", "1", "--out-dir", a.to_str().unwrap()]);
    assert_eq!(code(&clash), 2);
}

#[test]
fn series_and_curve_files_parse() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let o = brwlab(&["series", "--q-plus", "1", "--q-minus", "4", "--beta", "4", "--n-max", "50", "--at", "0.5", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir, "series.csv");
    assert_eq!(csv.lines().count(), 52);
    let summary: Value = serde_json::from_str(&read(dir, "series_summary.json")).unwrap();
    let s = &summary["summary"];
    assert!(s["partial_sum"].as_f64().unwrap() <= s["bound"].as_f64().unwrap());
    assert_eq!(summary["values"][0]["y"], 0.5);

    let cdir = dir.join("curve");
    let o = brwlab(&["curve", "--q-plus", "1", "--q-minus", "4", "--beta", "0.5", "--kind", "hpm", "--out-dir", cdir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&cdir, "curve_hpm.csv");
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() > 10);
    assert!(rows.iter().all(|r| r.len() == 3 && (0.0..=1.0).contains(&r[1]) && (0.0..=1.0).contains(&r[2])));
    assert_manifest_complete(&cdir);
}

#[test]
fn verify_exit_reflects_the_rows() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let pass = brwlab(&["verify", "--only", "3,7,15", "--out-dir", dir.join("ok").to_str().unwrap()]);
    assert_eq!(code(&pass), 0, "{}", String::from_utf8_lossy(&pass.stdout));

    let fixture = dir.join("fixture.json");
    fs::write(&fixture, r#"{"slope_at_point": 2.6}"#).unwrap();
    let fail = brwlab(&[
        "verify", "--only", "15", "--fixture", fixture.to_str().unwrap(), "--out-dir", dir.join("bad").to_str().unwrap(),
    ]);
    assert_eq!(code(&fail), 1);
    let rows: Value = serde_json::from_str(&read(&dir.join("bad"), "verify.json")).unwrap();
    assert!(rows.to_string().contains("\"pass\":false"));

    assert_eq!(code(&brwlab(&["verify", "--only", "16"])), 2);
}
