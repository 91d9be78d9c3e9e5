//! End-to-end behaviour of the command-line driver.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g2frob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn g2frob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2frob")).args(args).output().unwrap()
}

fn run(curve: &Path, ext: &str, scan: &str, out: &Path) -> Output {
    g2frob(&["--curve", curve.to_str().unwrap(), "--ext", ext, "--scan", scan, "--out", out.to_str().unwrap()])
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn c1_full_run_passes() {
    let out = scratch("c1-all.json");
    let o = run(&fixture("c1.curve"), "1", "all", &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == Value::Bool(true)));
    for key in ["version", "config", "curve", "field_ext", "b1", "p_rank", "scanned", "exceptions", "curve_invariants", "thm2", "prop35", "thm3"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["p_rank"], 0);
    assert_eq!(r["curve_invariants"]["hasse_witt"], serde_json::json!([["0", "1"], ["0", "0"]]));
}

#[test]
fn thm2_on_c2_over_gf4_lists_one_exception_per_two_torsion_class() {
    let out = scratch("c2-thm2.json");
    let o = run(&fixture("c2.curve"), "2", "thm2", &out);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out);
    let two_torsion = r["curve_invariants"]["two_torsion"].as_array().unwrap().len();
    assert_eq!(r["exceptions"].as_array().unwrap().len(), two_torsion);
    assert_eq!(two_torsion, 4);
    assert!(r.get("prop35").is_none());
}

#[test]
fn singular_model_is_an_input_error() {
    let out = scratch("singular.json");
    let o = run(&fixture("singular.curve"), "1", "all", &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular model"));
    assert!(!out.exists());
}

#[test]
fn malformed_and_oversized_inputs_exit_2() {
    let bad = scratch("bad.curve");
    std::fs::write(&bad, "1\n11\n1\n").unwrap();
    assert_eq!(run(&bad, "1", "all", &scratch("bad.json")).status.code(), Some(2));
    assert_eq!(run(&fixture("c1.curve"), "5", "thm2", &scratch("big.json")).status.code(), Some(2));
    assert_eq!(run(&fixture("c1.curve"), "3", "thm3-part1", &scratch("p1.json")).status.code(), Some(2));
    assert_eq!(run(Path::new("/nonexistent/curve"), "1", "all", &scratch("none.json")).status.code(), Some(2));
}

#[test]
fn higgs_brute_force_is_skipped_on_larger_fields_under_all() {
    let out = scratch("c1-gf8.json");
    let o = run(&fixture("c1.curve"), "3", "all", &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(report(&out)["thm3"]["part1"]["skipped"].is_string());
}

#[test]
fn selftest_passes_and_fault_injection_fails() {
    assert_eq!(g2frob(&["selftest"]).status.code(), Some(0));
    let o = g2frob(&["selftest", "--inject-fault", "corrupt-modulus-table"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("field-axioms"));
}

#[test]
fn seed_and_jobs_do_not_change_reports() {
    let (a, b) = (scratch("seed-a.json"), scratch("seed-b.json"));
    let c = fixture("c2.curve");
    let c = c.to_str().unwrap();
    let o1 = g2frob(&["--curve", c, "--scan", "thm2", "--out", a.to_str().unwrap(), "--jobs", "1"]);
    let o2 = g2frob(&["--curve", c, "--scan", "thm2", "--out", b.to_str().unwrap(), "--jobs", "3", "--seed", "99"]);
    assert_eq!((o1.status.code(), o2.status.code()), (Some(0), Some(0)));
    let (mut ra, mut rb) = (report(&a), report(&b));
    ra["config"]["seed"] = Value::Null;
    rb["config"]["seed"] = Value::Null;
    assert_eq!(ra, rb);
}
