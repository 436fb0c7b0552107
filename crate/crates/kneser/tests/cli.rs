use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn kneser(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(["--jobs", "1"])
        .args(args)
        .env("NEIGHBOR_CACHE_DIR", cache)
        .output()
        .expect("failed to spawn kneser")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&ok(out)).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn genus_then_hecke_table() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("genus.json");
    let input = data("hermitian_m7_n3.json");
    let out = kneser(&["genus", p(&input), "--primes", "2", "-o", p(&g)], dir.path());
    ok(&out);
    let genus: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(genus["class_number"], 2);
    assert_eq!(genus["mass"], "1/42");
    assert_eq!(genus["format"], "kneser-genus-v1");

    let table = ok(&kneser(&["hecke", p(&g), "--primes", "2,11", "--table"], dir.path()));
    let rows: Vec<Vec<String>> =
        table.lines().skip(1).map(|l| l.split_whitespace().take(3).map(String::from).collect()).collect();
    assert_eq!(rows, vec![vec!["2", "7", "-1"], vec!["11", "133", "5"]]);

    let h = json(&kneser(&["hecke", p(&g), "--primes", "2,11"], dir.path()));
    assert_eq!(h["convention"], "rows=source");
    assert_eq!(h["commute"], true);
    assert_eq!(h["matrices"][0]["matrix"], serde_json::json!([[6, 1], [7, 0]]));
    assert_eq!(h["eigensystems"][0]["label"], "eisenstein");
    assert_eq!(h["eigensystems"][1]["eigenvalues"], serde_json::json!(["-1", "5"]));
}

#[test]
fn theta_of_e8() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&kneser(&["theta", p(&data("e8.json")), "--cutoff", "4"], dir.path()));
    assert_eq!(v["theta"], serde_json::json!([1, 0, 240, 0, 2160]));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("hermitian_m7_n3.json");
    let runs: Vec<String> = (0..2)
        .map(|i| {
            // Separate caches so both runs compute from scratch.
            let cache = dir.path().join(format!("c{i}"));
            ok(&kneser(&["genus", p(&input), "--primes", "2,11"], &cache))
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let g = dir.path().join("g.json");
    std::fs::write(&g, &runs[0]).unwrap();
    let a = ok(&kneser(&["hecke", p(&g), "--primes", "2,23"], dir.path()));
    let b = ok(&kneser(&["hecke", p(&g), "--primes", "2,23"], dir.path()));
    assert_eq!(a, b);
}

#[test]
fn genus_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("hermitian_m7_lambda2.json");
    let g1 = dir.path().join("g1.json");
    ok(&kneser(&["genus", p(&input), "--primes", "2", "-o", p(&g1)], dir.path()));
    // Rewrite through a pretty-printer: the reader must not care about layout.
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&g1).unwrap()).unwrap();
    let g2 = dir.path().join("g2.json");
    std::fs::write(&g2, serde_json::to_string(&v).unwrap()).unwrap();
    let a = ok(&kneser(&["hecke", p(&g1), "--primes", "2,11"], dir.path()));
    let b = ok(&kneser(&["hecke", p(&g2), "--primes", "2,11"], dir.path()));
    assert_eq!(a, b);
}

#[test]
fn isometry_aut_and_neighbors() {
    let dir = tempfile::tempdir().unwrap();
    let l1 = data("hermitian_m7_n3.json");
    let l2 = data("hermitian_m7_lambda2.json");
    let v = json(&kneser(&["isometry", p(&l1), p(&l2)], dir.path()));
    assert_eq!(v["isometric"], false);
    let v = json(&kneser(&["isometry", p(&l2), p(&l2)], dir.path()));
    assert_eq!(v["isometric"], true);
    assert!(v["witness"].is_array());
    assert_eq!(json(&kneser(&["aut", p(&l1)], dir.path()))["order"], 48);
    assert_eq!(json(&kneser(&["aut", p(&l2)], dir.path()))["order"], 336);
    let v = json(&kneser(&["neighbors", p(&l1), "--prime", "2"], dir.path()));
    assert_eq!(v["count"], 7);
    assert_eq!(v["neighbors"].as_array().unwrap().len(), 7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"disc":-7,"rank":3,"basis":[[1]]}"#).unwrap();
    let out = kneser(&["aut", p(&bad)], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "validation_error");

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(kneser(&["aut", p(&bad)], dir.path()).status.code(), Some(2));

    let out = kneser(&["genus", p(&data("hermitian_m7_n3.json")), "--primes", "3"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "hypotheses_unverifiable");

    let out = kneser(&["genus", p(&data("cubic.json")), "--primes", "2"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn genus_cache_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let input = data("cubic.json");
    let first = ok(&kneser(&["genus", p(&input), "--primes", "3"], &cache));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = ok(&kneser(&["genus", p(&input), "--primes", "3"], &cache));
    assert_eq!(first, second);
    // A corrupted entry is recomputed and replaced rather than trusted.
    let entry = files[0].as_ref().unwrap().path();
    std::fs::write(&entry, "{}").unwrap();
    assert_eq!(ok(&kneser(&["genus", p(&input), "--primes", "3"], &cache)), first);
    assert_eq!(std::fs::read_to_string(&entry).unwrap(), first);
}
