//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use adic_shifts::coeff::{toeplitz_u, toeplitz_v};
use adic_shifts::harness::{self, random, CheckParams, CheckResult};
use adic_shifts::hilbert::TruncatedSpace;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn run(name: &str, s: u32, depth: u32) -> Result<CheckResult, String> {
    harness::run_check(name, &CheckParams::new(s, depth)).map_err(|e| format!("{name}: {e}"))
}

/// Runs `name` and requires `max_residual < bound` on a nonempty validity set.
fn below(name: &str, s: u32, depth: u32, bound: f64) -> Result<f64, String> {
    let r = run(name, s, depth)?;
    if r.validity_count == 0 {
        return Err(format!("{name} (s={s}, N={depth}): empty validity set"));
    }
    if !(r.max_residual < bound) {
        return Err(format!(
            "{name} (s={s}, N={depth}): residual {:.3e} >= {bound:e} {:?}",
            r.max_residual, r.notes
        ));
    }
    Ok(r.max_residual)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn isometry_and_adjoint() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for s in [2, 3, 5] {
        for k in ["U", "V", "S", "W"] {
            worst.0 = worst.0.max(below(&format!("isometry.{k}"), s, 6, 1e-12)?);
            worst.1 = worst.1.max(below(&format!("adjoint.{k}"), s, 6, 1e-14)?);
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "isometry residual {:.1e} < 1e-12, adjoint residual {:.1e} < 1e-14, {:.2?}",
        worst.0,
        worst.1,
        start.elapsed()
    ))
}

fn commutation_lemmas() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in ["U", "V", "S", "W"] {
        let r = run(&format!("lemma.{k}"), 2, 6)?;
        if r.validity_count == 0 || !(r.max_residual < 1e-12) {
            return Err(format!("lemma.{k}: residual {:.3e}", r.max_residual));
        }
        worst = worst.max(r.max_residual);
    }
    Ok(format!("four shifts, 50 cylinders each, residual {worst:.1e} < 1e-12"))
}

fn cuntz_toeplitz() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in [
        "cuntz.toeplitz_relations",
        "cuntz.sum_relation",
        "cuntz.matrix_units",
        "serre.matrix_units",
    ] {
        worst = worst.max(below(name, 2, 6, 1e-12)?);
    }
    Ok(format!("relations and both matrix-unit families at n, m <= 3, residual {worst:.1e}"))
}

fn toeplitz_norms() -> Outcome {
    let (s, depth, k, cyl) = (2, 6, 3, 2);
    let space = TruncatedSpace::new(s, depth).map_err(|e| e.to_string())?;
    let mut rng = random::rng_for(harness::DEFAULT_SEED, "acceptance.toeplitz");
    let (mut norm_dev, mut mult_dev) = (0.0f64, 0.0f64);
    let err = |e: adic_shifts::Error| e.to_string();
    for _ in 0..20 {
        let f = random::sequence(&mut rng, s, k, cyl).map_err(err)?;
        let g = random::sequence(&mut rng, s, k, cyl).map_err(err)?;
        let tf = toeplitz_u(space, &f).map_err(err)?;
        norm_dev = norm_dev.max((tf.spectral_norm(1e-13).map_err(err)? - f.sup_norm()).abs());
        let prod = toeplitz_u(space, &f.mul(&g).map_err(err)?).map_err(err)?;
        mult_dev = mult_dev.max(prod.max_abs_diff(&tf.mul(&toeplitz_u(space, &g).map_err(err)?).map_err(err)?).map_err(err)?);

        let x = random::xv_function(&mut rng, s, k, cyl).map_err(err)?;
        let y = random::xv_function(&mut rng, s, k, cyl).map_err(err)?;
        let tx = toeplitz_v(space, &x).map_err(err)?;
        norm_dev = norm_dev.max((tx.spectral_norm(1e-13).map_err(err)? - x.sup_norm()).abs());
        let prod = toeplitz_v(space, &x.mul(&y).map_err(err)?).map_err(err)?;
        mult_dev = mult_dev.max(prod.max_abs_diff(&tx.mul(&toeplitz_v(space, &y).map_err(err)?).map_err(err)?).map_err(err)?);
    }
    if !(norm_dev < 1e-9) {
        return Err(format!("norm deviation {norm_dev:.3e}"));
    }
    if !(mult_dev < 1e-13) {
        return Err(format!("multiplicativity deviation {mult_dev:.3e}"));
    }
    Ok(format!(
        "K=3, depth<=2, N=6: norm deviation {norm_dev:.1e} < 1e-9, multiplicativity {mult_dev:.1e} < 1e-13"
    ))
}

fn expectation_grading() -> Outcome {
    let q = below("expectation.quadrature", 2, 6, 1e-12)?;
    let c = below("expectation.contraction", 2, 6, 1e-10)?;
    let f = below("fourier.recovery", 2, 6, 1e-12)?;
    Ok(format!("quadrature {q:.1e}, contraction {c:.1e}, Fourier recovery {f:.1e}"))
}

fn correction_sweep() -> Outcome {
    let start = Instant::now();
    let r = run("tsproduct.sweep", 2, 6)?;
    within(start.elapsed(), Duration::from_secs(30))?;
    if r.validity_count == 0 || !(r.max_residual < 1e-13) {
        return Err(format!("residual {:.3e}", r.max_residual));
    }
    if !r.notes.iter().any(|n| n.starts_with("erratum:") && n.contains("j, l >= 0")) {
        return Err(format!("erratum note missing: {:?}", r.notes));
    }
    Ok(format!(
        "closed form and rank <= 1 within {:.1e}, erratum noted, {:.2?}",
        r.max_residual,
        start.elapsed()
    ))
}

fn serre_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["serre.commutator", "serre.induction", "serre.twprod", "serre.projections"] {
        worst = worst.max(below(name, 2, 6, 1e-12)?);
    }
    let p = run("serre.toeplitz", 2, 6)?;
    if !(p.max_residual < 1e-12) {
        return Err(format!("serre.toeplitz residual {:.3e}", p.max_residual));
    }
    Ok(format!("commutator, induction, twprod, P_0 diagonal: residual {worst:.1e}"))
}

fn transfer_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in ["U", "V", "S", "W"] {
        worst = worst.max(below(&format!("transfer.{k}"), 2, 6, 1e-11)?);
    }
    Ok(format!("100 word samples per shift, residual {worst:.1e} < 1e-11"))
}

fn full_suite() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_adic-shifts"))
        .args(["suite", "--filter", "*", "--s", "2", "--depth", "6", "--format", "json"])
        .output()
        .map_err(|e| format!("cannot run CLI: {e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    if !out.status.success() {
        return Err(format!("exit status {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let errata = report["checks"]
        .as_array()
        .ok_or("report has no checks")?
        .iter()
        .flat_map(|c| c["notes"].as_array().cloned().unwrap_or_default())
        .filter(|n| n.as_str().is_some_and(|n| n.starts_with("erratum:")))
        .count();
    if errata != 3 {
        return Err(format!("{errata} erratum notes, expected 3"));
    }
    if report["passed"] != serde_json::json!(true) {
        return Err("report not passed".into());
    }
    Ok(format!("exit 0 in {elapsed:.1?}, 3 erratum notes"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("isometry and adjoint suite", isometry_and_adjoint),
        ("commutation lemmas", commutation_lemmas),
        ("Cuntz-Toeplitz relations and matrix units", cuntz_toeplitz),
        ("Toeplitz norm identities", toeplitz_norms),
        ("expectation and grading", expectation_grading),
        ("T_S correction sweep", correction_sweep),
        ("Serre suite", serre_suite),
        ("transfer-operator identities", transfer_identities),
        ("full suite via CLI", full_suite),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS [{}] {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
