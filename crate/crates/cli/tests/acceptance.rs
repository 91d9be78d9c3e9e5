//! Acceptance criteria, one output line each. Every comparison is exact.
//! Exits with status 1 if any criterion fails.

use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use g2frob::report::Check;
use g2frob::scans::{self, Context};
use g2frob::selftest::{self, c1, c2, Options, SuiteResult};

type Outcome = Result<(), String>;

fn suites(results: &[SuiteResult]) -> Outcome {
    for r in results {
        if let Some(f) = &r.failure {
            return Err(format!("{}: {f}", r.name));
        }
    }
    Ok(())
}

fn checks(label: &str, cs: &[Check]) -> Outcome {
    match cs.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) => Err(format!("{label}: {} {}", c.name, c.counterexample.clone().unwrap_or_default())),
    }
}

/// The four scan configurations: both curves over GF(2) and GF(4).
fn contexts() -> Result<Vec<(String, Context)>, String> {
    let mut out = Vec::new();
    for (name, c) in [("C1", c1()), ("C2", c2())] {
        for ext in [1, 2] {
            let ctx = Context::new(&c, ext).map_err(|e| format!("{name} ext {ext}: {e}"))?;
            out.push((format!("{name}/GF({})", ctx.q()), ctx));
        }
    }
    Ok(out)
}

fn per_context<T>(limit: Duration, f: impl Fn(&Context) -> g2frob::Result<(T, Vec<Check>)>) -> Outcome {
    for (label, ctx) in contexts()? {
        let t = Instant::now();
        let (_, cs) = f(&ctx).map_err(|e| format!("{label}: {e}"))?;
        checks(&label, &cs)?;
        if t.elapsed() > limit {
            return Err(format!("{label}: took {:?}", t.elapsed()));
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let opts = Options::default();
    suites(&[selftest::field_axioms(&opts), selftest::even_odd(&opts)])
}

fn criterion_2() -> Outcome {
    suites(&[selftest::riemann_roch(&Options::default())])
}

fn criterion_3() -> Outcome {
    let opts = Options::default();
    suites(&[selftest::zeta(&opts), selftest::group_laws(&opts)])
}

fn criterion_4() -> Outcome {
    const WANTED: [&str; 3] = [
        "invariants.kernel_dim_equals_h0_b1_twist",
        "invariants.b1_unique_kernel",
        "invariants.b1_is_theta_characteristic",
    ];
    for (label, ctx) in contexts()? {
        let (inv, cs) = scans::curve_invariants(&ctx).map_err(|e| format!("{label}: {e}"))?;
        let relevant: Vec<Check> = cs.into_iter().filter(|c| WANTED.contains(&c.name.as_str())).collect();
        if relevant.len() != WANTED.len() {
            return Err(format!("{label}: missing checks"));
        }
        checks(&label, &relevant)?;
        if inv.theta_kernel_dims.iter().filter(|&&k| k == 1).count() != 1 {
            return Err(format!("{label}: kernel dims {:?}", inv.theta_kernel_dims));
        }
        if label.starts_with("C1") && (inv.p_rank != 0 || ctx.two_torsion.len() != 1 || inv.two_torsion_geometric != 1) {
            return Err(format!("{label}: p-rank {} with {} two-torsion classes", inv.p_rank, ctx.two_torsion.len()));
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    for (label, ctx) in contexts()? {
        let t = Instant::now();
        let (r, cs) = scans::scan_thm2(&ctx).map_err(|e| format!("{label}: {e}"))?;
        checks(&label, &cs)?;
        if r.exceptions.len() != ctx.two_torsion.len() {
            return Err(format!("{label}: {} exceptions", r.exceptions.len()));
        }
        if t.elapsed() > Duration::from_secs(60) {
            return Err(format!("{label}: took {:?}", t.elapsed()));
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    per_context(Duration::from_secs(60), scans::scan_prop35)
}

fn criterion_7() -> Outcome {
    for (label, ctx) in contexts()? {
        if ctx.q() == 2 || ctx.two_torsion.len() > 1 {
            let (_, cs) = scans::verify_thm3_part1(&ctx).map_err(|e| format!("{label}: {e}"))?;
            checks(&label, &cs)?;
        }
    }
    per_context(Duration::from_secs(60), scans::verify_thm3_part2)
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_g2frob");
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/c2.curve");
    let dir = std::env::temp_dir().join(format!("g2frob-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for i in 0..2 {
        let out = dir.join(format!("report-{i}.json"));
        let status = Command::new(bin)
            .args(["--curve", fixture.to_str().unwrap(), "--ext", "2", "--scan", "all", "--out"])
            .arg(&out)
            .stderr(Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if status.code() != Some(0) {
            return Err(format!("run {i} exited with {status}"));
        }
        reports.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if reports[0] != reports[1] {
        return Err("reports differ".into());
    }
    Ok(())
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("algebra substrate", Duration::from_secs(5), criterion_1),
        ("Riemann-Roch identity", Duration::from_secs(30), criterion_2),
        ("Jacobian order and group laws", Duration::from_secs(30), criterion_3),
        ("Cartier kernel and B1", Duration::from_secs(60), criterion_4),
        ("pull-backs with determinant L_theta", Duration::from_secs(240), criterion_5),
        ("pull-backs with trivial determinant", Duration::from_secs(240), criterion_6),
        ("Higgs fields", Duration::from_secs(240), criterion_7),
        ("deterministic reports", Duration::from_secs(120), criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut outcome = f();
        let elapsed = t.elapsed();
        if outcome.is_ok() && elapsed > *limit {
            outcome = Err(format!("runtime {elapsed:?} over {limit:?}"));
        }
        match outcome {
            Ok(()) => println!("PASS {} {name} ({:.2}s)", i + 1, elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
