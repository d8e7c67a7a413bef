use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn critlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critlab")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = critlab(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn report(path: &Path) -> Vec<Value> {
    fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn orbit_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let args = ["orbit", "--group", "builtin:modular", "--rep", "sym:3", "--max-len", "6", "--functional", "a1,a2", "--out", "o"];
    ok(tmp.path(), &args);
    let first = fs::read(tmp.path().join("o/orbit.csv")).unwrap();
    let first_report = fs::read(tmp.path().join("o/orbit.jsonl")).unwrap();
    ok(tmp.path(), &args);
    assert_eq!(first, fs::read(tmp.path().join("o/orbit.csv")).unwrap());
    assert_eq!(first_report, fs::read(tmp.path().join("o/orbit.jsonl")).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.lines().any(|l| l == "word,len,disp,k1,k2,k3,a1,a2"));
    assert!(text.starts_with("# config: {\"command\":\"orbit\""));
    assert!(tmp.path().join("o/orbit.time").exists());
}

#[test]
fn resumed_run_matches_fresh_run() {
    let tmp = TempDir::new().unwrap();
    let base = ["orbit", "--group", "builtin:pants", "--max-len", "5", "--out", "o"];
    ok(tmp.path(), &base);
    let fresh = fs::read(tmp.path().join("o/orbit.csv")).unwrap();
    fs::remove_dir_all(tmp.path().join("o")).unwrap();

    ok(tmp.path(), &[&base[..], &["--stop-after", "2"]].concat());
    let partial = fs::read(tmp.path().join("o/orbit.csv")).unwrap();
    assert!(partial.len() < fresh.len());
    assert!(!tmp.path().join("o/orbit.jsonl").exists());
    // junk past the checkpoint is discarded
    let mut torn = partial.clone();
    torn.extend_from_slice(b"aBa,3,1.0");
    fs::write(tmp.path().join("o/orbit.csv"), torn).unwrap();
    ok(tmp.path(), &[&base[..], &["--resume"]].concat());
    assert_eq!(fresh, fs::read(tmp.path().join("o/orbit.csv")).unwrap());

    // a checkpoint from another configuration is refused
    let out = critlab(tmp.path(), &["orbit", "--group", "builtin:pants", "--max-len", "4", "--out", "o", "--resume"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("empty.grp"), "# no generators\n").unwrap();
    for args in [
        vec!["orbit", "--group", "empty.grp"],
        vec!["orbit", "--group", "missing.grp"],
        vec!["orbit", "--rep", "sym:1"],
        vec!["critexp", "--functional", "a7"],
        vec!["critexp", "--window", "5,2"],
        vec!["double", "--group", "builtin:pants"],
    ] {
        let out = critlab(tmp.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn numeric_failures_exit_3() {
    let tmp = TempDir::new().unwrap();
    let out = critlab(tmp.path(), &["orbit", "--group", "builtin:schottky", "--rep", "sym:3", "--max-len", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ill-conditioned"));
}

#[test]
fn config_file_overrides_flags() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("run.toml"), "max-len = 3\nfunctional = \"a2\"\n").unwrap();
    ok(tmp.path(), &["orbit", "--max-len", "5", "--config", "run.toml", "--out", "o"]);
    let r = &report(&tmp.path().join("o/orbit.jsonl"))[0];
    assert_eq!(r["max_len"], 3);
    assert_eq!(r["config"]["functional"], "a2");
}

#[test]
fn group_and_rep_files() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("g.grp"), "translation = 3 0\ntranslation = 3 1.5707963267948966\n").unwrap();
    fs::write(tmp.path().join("r.rep"), "image = 2 0 0 0.5\nimage = 1 1 0 1\n").unwrap();
    ok(tmp.path(), &["orbit", "--group", "g.grp", "--rep", "r.rep", "--max-len", "3", "--out", "o"]);
    let csv = fs::read_to_string(tmp.path().join("o/orbit.csv")).unwrap();
    assert!(csv.contains("# label: unverified representation"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 1 + 4 + 12 + 36);
}

#[test]
fn conerank_has_no_violations() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["conerank", "--n", "2", "--trials", "10000", "--seed", "1", "--out", "c"]);
    let r = &report(&tmp.path().join("c/conerank.jsonl"))[0];
    assert_eq!(r["violations"], 0);
    assert_eq!(r["witness_check"], true);
}

#[test]
fn critexp_recovers_a_synthetic_exponent() {
    // N(T) = e^{T/2}: values 2·ln i
    let tmp = TempDir::new().unwrap();
    let mut text = String::from("# complete_to = 16\n");
    for i in 1..3000 {
        text.push_str(&format!("{}\n", 2.0 * (i as f64).ln()));
    }
    fs::write(tmp.path().join("v.txt"), text).unwrap();
    ok(tmp.path(), &["critexp", "--values", "v.txt", "--out", "c"]);
    let r = &report(&tmp.path().join("c/critexp.jsonl"))[0];
    let v = r["estimate"]["value"].as_f64().unwrap();
    assert!((v - 0.5).abs() < 0.01, "{v}");
    assert_eq!(r["complete_to"], 16.0);
}

#[test]
fn critexp_on_the_modular_group() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["critexp", "--radius", "10", "--functional", "a1,a2", "--out", "c"]);
    let lines = report(&tmp.path().join("c/critexp.jsonl"));
    assert_eq!(lines.len(), 2);
    for r in &lines {
        let v = r["estimate"]["value"].as_f64().unwrap();
        assert!((v - 1.0).abs() < 0.05, "{v}");
        assert!(r["complete_to"].as_f64().unwrap() > 9.0);
    }
}

#[test]
fn tp_roundtrip() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["tp", "--dim", "4", "--trials", "1000", "--seed", "7", "--out", "t"]);
    let r = &report(&tmp.path().join("t/tp.jsonl"))[0];
    assert!(r["max_roundtrip_error"].as_f64().unwrap() < 1e-9);
    assert!(r["max_additivity_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn curve_dimension_shadows_double_plot() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path();
    ok(p, &["limitcurve", "--max-len", "5", "--out", "o"]);
    let curve = fs::read_to_string(p.join("o/curve.csv")).unwrap();
    assert!(curve.lines().any(|l| l == "theta,k,b1,b2,b3"));

    ok(p, &["dimension", "--group", "builtin:schottky", "--depth", "7", "--out", "o"]);
    let d = report(&p.join("o/dimension.jsonl"))[0]["box_dimension"]["value"].as_f64().unwrap();
    assert!(d > 0.0 && d < 1.0, "{d}");

    ok(p, &["shadows", "--group", "builtin:schottky", "--max-len", "6", "--out", "o"]);
    let s = &report(&p.join("o/shadows.jsonl"))[0];
    assert!(s["distortion"]["spread"].as_f64().unwrap() < 1e2);

    ok(p, &["double", "--group", "builtin:pants", "--boundary", "a,b,BA", "--radius", "8", "--out", "o"]);
    let csv = fs::read_to_string(p.join("o/doubled.csv")).unwrap();
    assert!(csv.contains("# label: non-exhaustive enumeration"));
    assert!(csv.lines().any(|l| l.starts_with("word,len,disp,refl_parity,")));

    ok(p, &["plot", "--input", "o/doubled.csv", "--svg", "o/n.svg", "--out", "o"]);
    assert!(fs::read_to_string(p.join("o/n.svg")).unwrap().starts_with("<svg"));
    assert!(fs::read_to_string(p.join("o/plot.txt")).unwrap().contains("log N"));
}
