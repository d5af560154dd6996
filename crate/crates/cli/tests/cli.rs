use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gromov-lab"));
    c.env_remove("GROMOV_LAB_CONFIG");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let o = run(dir, args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn generate_writes_graph_json_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--kind", "line", "--T", "4", "--h", "0.5", "-o", "line.json"]);
    let g = json(dir.path().join("line.json"));
    assert_eq!(g["vertices"].as_array().unwrap().len(), 17);
    assert_eq!(g["edges"].as_array().unwrap().len(), 16);
    assert_eq!(g["meta"]["basePoint"], 8);
    assert_eq!(g["meta"]["generatorProvenance"]["kind"], "line");
}

#[test]
fn verify_doubling_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--kind", "line", "--T", "4", "--h", "0.5", "-o", "line.json"]);
    ok(dir.path(), &["verify", "doubling", "--R0", "2", "line.json", "-o", "d.json", "--csv-dir", "csv"]);
    let r = json(dir.path().join("d.json"));
    assert_eq!(r["schema"], "gromov-lab/1");
    assert_eq!(r["status"], "pass");
    let cd = r["measured"]["Cd"].as_f64().unwrap();
    assert!((1.0..=4.0).contains(&cd), "{cd}");
    assert_eq!(r["provenance"]["inputHashes"].as_array().unwrap().len(), 1);
    let csv: Vec<_> = fs::read_dir(dir.path().join("csv")).unwrap().collect();
    assert!(!csv.is_empty());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--kind", "kary-tree", "--K", "2", "--D", "4", "-o", "t.json"]);
    ok(dir.path(), &["verify", "uniformization", "t.json", "--beta", "8", "--samples", "20", "-o", "a.json"]);
    ok(dir.path(), &["verify", "uniformization", "t.json", "--beta", "8", "--samples", "20", "-o", "b.json"]);
    let (a, b) = (fs::read(dir.path().join("a.json")).unwrap(), fs::read(dir.path().join("b.json")).unwrap());
    assert_eq!(a, b);
}

#[test]
fn tree_pipeline_produces_one_composite_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["pipeline", "tree-uniformize-verify", "--K", "2", "--D", "8", "--eps", "1", "--beta", "3", "-o", "p.json"]);
    assert_ne!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(dir.path().join("p.json"));
    let checks: Vec<&str> = r["sections"].as_array().unwrap().iter().map(|s| s["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["global-doubling", "whitney-inclusion"]);
    assert_eq!(r["sections"][1]["status"], "pass");
}

#[test]
fn usage_and_data_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&run(dir.path(), &["generate", "--kind", "line", "--bogus", "-o", "x.json"])), 1);
    assert_eq!(code(&run(dir.path(), &["generate", "--kind", "line", "--h", "0.5", "-o", "x.json"])), 1);
    fs::write(dir.path().join("bad.json"), r#"{"vertices":[{"id":0,"mass":1}],"edges":[{"u":0,"v":3,"len":1}]}"#).unwrap();
    let o = run(dir.path(), &["verify", "doubling", "bad.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("edges[0]"));
    assert_eq!(code(&run(dir.path(), &["verify", "doubling", "missing.json"])), 1);
    assert_eq!(code(&run(dir.path(), &["--tol-solve", "-1", "verify", "doubling", "bad.json"])), 1);
}

#[test]
fn config_file_from_environment_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--kind", "line", "--T", "4", "--h", "0.5", "-o", "line.json"]);
    fs::write(dir.path().join("cfg.json"), r#"{"R0": 1.5, "seed": 7}"#).unwrap();
    let o = bin()
        .current_dir(dir.path())
        .env("GROMOV_LAB_CONFIG", dir.path().join("cfg.json"))
        .args(["verify", "doubling", "line.json", "-o", "d.json"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let r = json(dir.path().join("d.json"));
    assert_eq!(r["measured"]["R0"], 1.5);
    assert_eq!(r["provenance"]["seed"], 7);
}

#[test]
fn failing_check_exits_two_and_still_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["generate", "--kind", "line", "--T", "6", "--h", "0.25", "-o", "line.json"]);
    // on a short line the witnesses cannot show the required fourfold growth
    let o = run(dir.path(), &["verify", "canonical", "line.json", "line.json", "--eps", "0.5", "--eps2", "0.25", "--samples", "2", "-o", "c.json"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(dir.path().join("c.json"))["status"], "fail");
}

#[test]
fn transforms_write_readable_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "line", "--T", "3", "--h", "0.5", "-o", "line.json"]);
    ok(d, &["uniformize", "--eps", "1", "--beta", "2", "line.json", "u.json"]);
    let u = json(d.join("u.json"));
    assert_eq!(u["meta"]["epsilon"], 1.0);
    // the uniformized line has length (2/ε)(1 − e^{−εT})
    let total: f64 = u["edges"].as_array().unwrap().iter().map(|e| e["len"].as_f64().unwrap()).sum();
    assert!((total - 2.0 * (1.0 - (-3.0f64).exp())).abs() < 1e-12, "{total}");

    ok(d, &["generate", "--kind", "interval", "--h", "0.25", "-o", "i.json"]);
    ok(d, &["hyperbolize", "--alpha", "1", "i.json", "k.json"]);
    let k = json(d.join("k.json"));
    assert_eq!(k["vertices"].as_array().unwrap().len(), 7);

    ok(d, &["product", "i.json", "i.json", "-o", "sq.json"]);
    let sq = json(d.join("sq.json"));
    assert_eq!(sq["vertices"].as_array().unwrap().len(), 81);

    ok(d, &["indirect-product", "--eps", "1", "line.json", "line.json", "-o", "ip.json", "--report", "ipr.json"]);
    let r = json(d.join("ipr.json"));
    assert_eq!(r["sections"][0]["check"], "projection-lipschitz");
}

#[test]
fn solve_capacity_and_liouville_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "line", "--T", "2", "--h", "0.5", "-o", "line.json"]);
    ok(d, &["solve", "pharmonic", "line.json", "--ends", "-o", "u.csv", "--report", "s.json"]);
    let csv = fs::read_to_string(d.join("u.csv")).unwrap();
    let values: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    // linear interpolation between the two ends
    for (i, v) in values.iter().enumerate() {
        assert!((v - i as f64 / 8.0).abs() < 1e-9, "{values:?}");
    }
    let s = json(d.join("s.json"));
    assert!((s["measured"]["energy"].as_f64().unwrap() - 0.25).abs() < 1e-9);

    ok(d, &["capacity", "line.json", "--set", "4", "--omega", "3,4,5", "-o", "c.json"]);
    assert!(json(d.join("c.json"))["measured"]["capacity"].as_f64().unwrap() > 0.0);

    ok(d, &["liouville", "--kind", "line", "--weight", "exp:1.0", "--p", "2", "--h", "0.25", "--tgrid", "4,6,8", "-o", "l.json"]);
    assert_eq!(json(d.join("l.json"))["check"], "liouville-experiment");
}

#[test]
fn remaining_verify_checks_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "line", "--T", "3", "--h", "0.25", "-o", "line.json"]);
    ok(d, &["generate", "--kind", "interval", "--h", "0.125", "-o", "i.json"]);
    ok(d, &["verify", "delta", "line.json", "-o", "delta.json"]);
    assert_eq!(json(d.join("delta.json"))["measured"]["delta"], 0.0);
    for args in [
        vec!["verify", "poincare", "line.json", "--center", "12", "--radius", "1"],
        vec!["verify", "upgrade", "line.json", "--R0", "1", "--R1", "2"],
        vec!["verify", "roundtrip", "line.json", "--samples", "20"],
        vec!["verify", "transfer", "line.json", "--annulus", "0.5", "2"],
        vec!["verify", "hyperbolization", "i.json", "--R0", "0.25", "--samples", "20"],
        vec!["verify", "product", "i.json", "i.json", "--samples", "10"],
        vec!["pipeline", "square-hyperbolize-verify", "--h", "0.25", "--samples", "20"],
    ] {
        let o = run(d, &args);
        assert_ne!(code(&o), 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let r: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(r["schema"], "gromov-lab/1", "{args:?}");
    }
}
