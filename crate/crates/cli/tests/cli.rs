use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qinv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn lens_prints_both_paths() {
    let o = qinv(&["lens", "--p", "2", "--K", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = |prefix: &str| {
        out.lines().find(|l| l.starts_with(prefix)).unwrap().split(':').nth(1).unwrap().trim().to_owned()
    };
    assert_eq!(line("surgery sum"), line("closed form"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn lens_with_negative_p() {
    let o = qinv(&["lens", "--p", "-7", "--K", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn skipped_only_exits_two() {
    assert_eq!(qinv(&["lens", "--p", "10", "--K", "5"]).status.code(), Some(2));
    assert_eq!(qinv(&["gauss", "--K", "7", "--p", "14"]).status.code(), Some(2));
}

#[test]
fn non_prime_is_rejected() {
    let o = qinv(&["lens", "--p", "2", "--K", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd prime"));
}

#[test]
fn gauss_checks() {
    let o = qinv(&["gauss", "--K", "5", "--p", "2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("X_cycl(p=2, m=1; K=5) = -q^2"));
}

#[test]
fn symmetry_all_colors() {
    let o = qinv(&["symmetry", "--p", "-3", "--K", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(" ok")).count(), 12);
}

#[test]
fn verify_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let manifold = write(dir.path(), "s3.json", r#"{"surgery_unknot_framings": []}"#);
    let out = dir.path().join("report.json");
    let o = qinv(&["verify", "--manifold", &manifold, "--primes", "5,7,11", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let reports = report.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert_eq!(r["schema"], 1);
        assert_eq!(r["status"], "pass");
        let lambda = r["lambda"].as_array().unwrap();
        assert_eq!(lambda[0], "1");
        assert!(lambda[1..].iter().all(|l| l == "0"));
    }
}

#[test]
fn verify_connected_sum_and_skip() {
    let dir = tempfile::tempdir().unwrap();
    let manifold = write(dir.path(), "m.json", r#"{"surgery_unknot_framings": [-2, -3]}"#);
    assert_eq!(qinv(&["verify", "--manifold", &manifold, "--primes", "7,11,13"]).status.code(), Some(0));
    // K = 3 divides h1 = 6: skipped, not failed.
    assert_eq!(qinv(&["verify", "--manifold", &manifold, "--primes", "3"]).status.code(), Some(2));
    assert_eq!(qinv(&["verify", "--manifold", &manifold, "--primes", "3,7"]).status.code(), Some(0));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let manifold = write(dir.path(), "m.json", r#"{"surgery_unknot_framings": [5], "embedded_unknot_colors": [3]}"#);
    let run = || {
        let o = qinv(&["verify", "--manifold", &manifold, "--primes", "7,11", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        for r in v.as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("timings");
        }
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_csv() {
    let dir = tempfile::tempdir().unwrap();
    let manifold = write(dir.path(), "m.json", r#"{"surgery_unknot_framings": [-2]}"#);
    let o = qinv(&["verify", "--manifold", &manifold, "--primes", "5", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.starts_with("K,n,a_n,lambda_n,lambda_n_mod_K\n5,0,"));
}

#[test]
fn malformed_manifold() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"surgery_unknot_framings": [0]}"#);
    assert_eq!(qinv(&["verify", "--manifold", &bad]).status.code(), Some(1));
    let junk = write(dir.path(), "junk.json", "not json");
    assert_eq!(qinv(&["ohtsuki", "--manifold", &junk]).status.code(), Some(1));
}

#[test]
fn ohtsuki_from_dtable_matches_manifold() {
    let dir = tempfile::tempdir().unwrap();
    let table =
        write(dir.path(), "unknot.json", r#"{"h1M": 1, "self_linking": -3, "entries": [{"m": 0, "n": 0, "d": "1"}]}"#);
    let manifold = write(dir.path(), "l3.json", r#"{"surgery_unknot_framings": [-3]}"#);
    let a = qinv(&["ohtsuki", "--dtable", &table, "--depth", "5", "--format", "json"]);
    let b = qinv(&["ohtsuki", "--manifold", &manifold, "--depth", "5", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["h1"], 3);
    assert_eq!(v["lambda"][0], "1/3");
    assert_eq!(v["lambda"][1], "1/18");
}
