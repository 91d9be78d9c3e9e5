//! Batch driver: loads a curve file, runs the requested scans over a base
//! change, and writes a single JSON report.
//!
//! Exit codes: `0` when every check passes, `1` when a mathematical check
//! fails (the report is still written and carries the counterexample), `2`
//! for input errors (unreadable or malformed file, singular model, field out
//! of range).

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;

use g2frob::curve::Curve;
use g2frob::report::{Check, ClassJson, CurveJson};
use g2frob::scans::{
    self, Context, ExtCase, Invariants, Prop35Report, Thm2Report, Thm3Part1Report, Thm3Part2Entry,
};
use g2frob::selftest;
use g2frob::Error;

/// Version string written into every report.
pub const REPORT_VERSION: &str = concat!("g2frob ", env!("CARGO_PKG_VERSION"));

/// Largest field on which the bundle scans enumerate classes.
pub const MAX_SCAN_FIELD: u64 = 16;
/// Largest field for the brute-force Higgs-field scan.
pub const MAX_HIGGS_FIELD: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scan {
    Invariants,
    Thm2,
    Prop35,
    #[value(name = "thm3-part1")]
    #[serde(rename = "thm3-part1")]
    Thm3Part1,
    #[value(name = "thm3-part2")]
    #[serde(rename = "thm3-part2")]
    Thm3Part2,
    All,
}

impl fmt::Display for Scan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub curve_path: PathBuf,
    pub field_ext: u32,
    pub scan: Scan,
    pub out_path: PathBuf,
    pub seed: u64,
}

/// Why a run did not produce an all-pass report.
#[derive(Debug)]
pub enum RunError {
    /// Bad input; nothing was computed. Exit code 2.
    Input(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

#[derive(Debug, Serialize)]
struct ConfigJson {
    curve: String,
    field_ext: u32,
    scan: Scan,
    seed: u64,
}

#[derive(Debug, Default, Serialize)]
struct Thm3Json {
    #[serde(skip_serializing_if = "Option::is_none")]
    part1: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    part2: Option<Vec<Thm3Part2Entry>>,
}

/// The JSON report.
#[derive(Debug, Serialize)]
pub struct Report {
    version: &'static str,
    config: ConfigJson,
    curve: CurveJson,
    field_ext: u32,
    field_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve_invariants: Option<Invariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b1: Option<ClassJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scanned: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exceptions: Option<Vec<ExtCase>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thm2: Option<Thm2Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prop35: Option<Prop35Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thm3: Option<Thm3Json>,
    checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn input_error(e: impl fmt::Display) -> RunError {
    RunError::Input(e.to_string())
}

/// Loads and validates a curve file.
pub fn load_curve(path: &Path) -> Result<Curve, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Curve::parse(&text).map_err(input_error)
}

/// Records a computational failure inside a scan as a failing check.
fn scan_error(name: &str, e: Error) -> Check {
    Check::failed(name, json!({ "error": e.to_string() }))
}

/// Builds the report for a configuration. Input problems are returned as
/// [`RunError`]; mathematical failures are failing checks in the report.
pub fn build_report(cfg: &RunConfig) -> Result<Report, RunError> {
    g2frob::poly::set_factor_seed(cfg.seed);
    let base = load_curve(&cfg.curve_path)?;
    if cfg.field_ext == 0 {
        return Err(input_error("field extension degree must be at least 1"));
    }
    let m = base.field().degree() * cfg.field_ext;
    if m > 16 {
        return Err(input_error(format!("field GF(2^{m}) is out of range (at most GF(2^16))")));
    }
    let size = 1u64 << m;
    if size > MAX_SCAN_FIELD {
        return Err(input_error(format!("field GF({size}) is too large for exhaustive scans (at most GF({MAX_SCAN_FIELD}))")));
    }
    if cfg.scan == Scan::Thm3Part1 && size > MAX_HIGGS_FIELD {
        return Err(input_error(format!("thm3-part1 brute force needs a field of size at most {MAX_HIGGS_FIELD}, got {size}")));
    }

    let mut report = Report {
        version: REPORT_VERSION,
        config: ConfigJson {
            curve: cfg.curve_path.display().to_string(),
            field_ext: cfg.field_ext,
            scan: cfg.scan,
            seed: cfg.seed,
        },
        curve: (&base).into(),
        field_ext: cfg.field_ext,
        field_size: size,
        curve_invariants: None,
        b1: None,
        p_rank: None,
        scanned: None,
        exceptions: None,
        thm2: None,
        prop35: None,
        thm3: None,
        checks: Vec::new(),
    };

    let ctx = match Context::new(&base, cfg.field_ext) {
        Ok(ctx) => ctx,
        Err(e) => {
            report.checks.push(scan_error("setup.locate_b1", e));
            return Ok(report);
        }
    };
    report.b1 = Some((&ctx.theta).into());

    let wants = |s: Scan| cfg.scan == s || cfg.scan == Scan::All;
    match scans::curve_invariants(&ctx) {
        Ok((inv, checks)) => {
            report.p_rank = Some(inv.p_rank);
            report.curve_invariants = Some(inv);
            report.checks.extend(checks);
        }
        Err(e) => report.checks.push(scan_error("invariants", e)),
    }
    if wants(Scan::Thm2) {
        match scans::scan_thm2(&ctx) {
            Ok((r, checks)) => {
                report.scanned = Some(r.scanned);
                report.exceptions = Some(r.exceptions.clone());
                report.thm2 = Some(r);
                report.checks.extend(checks);
            }
            Err(e) => report.checks.push(scan_error("thm2", e)),
        }
    }
    if wants(Scan::Prop35) {
        match scans::scan_prop35(&ctx) {
            Ok((r, checks)) => {
                report.prop35 = Some(r);
                report.checks.extend(checks);
            }
            Err(e) => report.checks.push(scan_error("prop35", e)),
        }
    }
    if wants(Scan::Thm3Part1) {
        let thm3 = report.thm3.get_or_insert_with(Thm3Json::default);
        if size > MAX_HIGGS_FIELD {
            thm3.part1 = Some(json!({ "skipped": format!("brute force runs on fields of size at most {MAX_HIGGS_FIELD}") }));
        } else {
            match scans::verify_thm3_part1(&ctx) {
                Ok((r, checks)) => {
                    thm3.part1 = Some(serde_json::to_value::<Thm3Part1Report>(r).expect("serializable"));
                    report.checks.extend(checks);
                }
                Err(e) => report.checks.push(scan_error("thm3.part1", e)),
            }
        }
    }
    if wants(Scan::Thm3Part2) {
        match scans::verify_thm3_part2(&ctx) {
            Ok((r, checks)) => {
                report.thm3.get_or_insert_with(Thm3Json::default).part2 = Some(r);
                report.checks.extend(checks);
            }
            Err(e) => report.checks.push(scan_error("thm3.part2", e)),
        }
    }
    Ok(report)
}

/// Runs a configuration end to end and returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let report = match build_report(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    if let Err(e) = std::fs::write(&cfg.out_path, report.to_json()) {
        eprintln!("input error: cannot write {}: {e}", cfg.out_path.display());
        return 2;
    }
    let failed: Vec<&Check> = report.checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        eprintln!("FAILED {}", c.name);
    }
    eprintln!(
        "{} checks, {} failed; report written to {}",
        report.checks.len(),
        failed.len(),
        cfg.out_path.display()
    );
    if failed.is_empty() {
        0
    } else {
        1
    }
}

/// Fault injections for exercising the self-test failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Replace the GF(4) modulus with the reducible `t^2 + 1`.
    CorruptModulusTable,
}

/// Runs the property suites; returns the exit code.
pub fn selftest(seed: u64, fault: Option<Fault>) -> i32 {
    let mut opts = selftest::Options { seed, ..Default::default() };
    if fault == Some(Fault::CorruptModulusTable) {
        opts.moduli[1] = 0b101;
    }
    for r in selftest::run_all(&opts) {
        match &r.failure {
            None => println!("ok     {:<22} {} cases", r.name, r.cases),
            Some(f) => {
                println!("FAILED {:<22} {f}", r.name);
                eprintln!("self-test suite '{}' failed", r.name);
                return 1;
            }
        }
    }
    0
}
