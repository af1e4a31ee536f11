//! Acceptance criteria, one PASS/FAIL line each. Runs without the test
//! harness so the lines always reach the output.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use hilbert_modular::numberfield::{unit_group, FractionalIdeal, TotallyRealField};
use hilbert_modular::hyperbolic::psh_hessian;
use hilbert_modular::thresholds::{ample_threshold, general_type_threshold, green_griffiths_threshold, nef_slope_coefficient};
use hilbert_modular::cusps::CoverVariant;
use hilbert_modular::toroidal::{cusp_resolution_fan, is_smooth};
use hilbert_modular::verify::{run_suite, Fixtures, SuiteResult, DEFAULT_SEED};

struct Verdict {
    ok: bool,
    detail: String,
}

fn suite(name: &str, min_cases: usize) -> Verdict {
    match run_suite(name, DEFAULT_SEED, &Fixtures::builtin()) {
        Ok(SuiteResult { passed, cases, failures, notes, .. }) => {
            let ok = passed && cases >= min_cases && failures == 0;
            let mut detail = format!("{cases} checks, {failures} failures");
            if let Some(n) = notes.iter().find(|n| n.starts_with("FAIL")) {
                detail.push_str(&format!("; {n}"));
            }
            Verdict { ok, detail }
        }
        Err(e) => Verdict { ok: false, detail: e.to_string() },
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn psh_exact() -> Verdict {
    let mut bad = Vec::new();
    for n in 2..=8usize {
        let h = psh_hessian(&rat(1, n as i64), n).expect("valid exponent");
        if !(h.psd && h.zero_eigenvalues() == 1 && h.cross_check()) {
            bad.push(format!("t = 1/{n}"));
        }
        let past = psh_hessian(&(rat(1, n as i64) + rat(1, 100)), n).expect("valid exponent");
        if past.psd || !past.cross_check() {
            bad.push(format!("t = 1/{n} + 1/100"));
        }
    }
    Verdict { ok: bad.is_empty(), detail: if bad.is_empty() { "n = 2..8".into() } else { bad.join(", ") } }
}

fn thresholds() -> Verdict {
    let one = rat(1, 1);
    let mut bad = Vec::new();
    let pi4 = std::f64::consts::PI.powi(4);
    let a = ample_threshold(2, &one).expect("n = 2");
    if (a.value().mid() / pi4 - 1.0).abs() > 1e-12 {
        bad.push(format!("ample_threshold(2, 1) = {}", a.value().mid()));
    }
    for n in 2..=8u32 {
        if green_griffiths_threshold(n).ok() != ample_threshold(n, &rat(n as i64, 1)).ok() {
            bad.push(format!("green_griffiths({n})"));
        }
        let zero = ample_threshold(n, &one).expect("valid n").value().mid();
        let q = BigRational::from_float(zero).expect("finite");
        let c = nef_slope_coefficient(n, &q, CoverVariant::Torsion).expect("positive norm");
        if c.mid().abs() > 1e-10 {
            bad.push(format!("nef slope at n = {n}: {}", c.mid()));
        }
    }
    let g6 = general_type_threshold(6).expect("n = 6").value();
    if !(g6.hi < 2.0) {
        bad.push(format!("general_type_threshold(6) = {}", g6.mid()));
    }
    Verdict {
        ok: bad.is_empty(),
        detail: if bad.is_empty() { format!("general_type_threshold(6) = {:.6}", g6.mid()) } else { bad.join(", ") },
    }
}

fn resolution() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [2i64, 3, 5, 13] {
        let f = TotallyRealField::quadratic(d).expect("quadratic field");
        let o = FractionalIdeal::unit(&f);
        let unit = unit_group(&f).expect("units").totally_positive[0].clone();
        let fan = match cusp_resolution_fan(&o, &unit) {
            Ok(fan) => fan,
            Err(e) => {
                ok = false;
                parts.push(format!("d = {d}: {e}"));
                continue;
            }
        };
        let unimodular = fan.cones().iter().all(|c| is_smooth(c, &o).unwrap_or(false));
        let good = unimodular && fan.cycle_relation_holds() && fan.unit_invariance();
        ok &= good;
        let cycle: Vec<String> = fan.cycle().unwrap_or(&[]).iter().map(ToString::to_string).collect();
        parts.push(format!("d = {d}: [{}]{}", cycle.join(" "), if good { "" } else { " FAILED" }));
    }
    Verdict { ok, detail: parts.join(", ") }
}

fn determinism() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hmv"))
            .args(["verify", "--format", "json", "--seed", "12345"])
            .output()
            .expect("hmv runs")
    };
    let a = run();
    let b = run();
    let ok = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    Verdict { ok, detail: format!("{} bytes, exit codes {:?} {:?}", a.stdout.len(), a.status.code(), b.status.code()) }
}

fn main() {
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Verdict>)> = vec![
        ("1 ideal identities", Duration::from_secs(30), Box::new(|| suite("ideals", 3 * 200 * 2))),
        ("2 depth product bound", Duration::from_secs(60), Box::new(|| suite("depth", 3 * 100 * 2))),
        ("3 psh hessian", Duration::from_secs(1), Box::new(psh_exact)),
        ("4 superadditivity", Duration::from_secs(10), Box::new(|| suite("superadditivity", 3 * 500))),
        ("5 volume monotonicity", Duration::from_secs(60), Box::new(|| suite("volume", 5 * 49))),
        ("6 lelong cross-check", Duration::from_secs(30), Box::new(|| suite("lelong", 20 * 2))),
        ("7 threshold reproduction", Duration::from_secs(1), Box::new(thresholds)),
        ("8 precise invariance", Duration::from_secs(60), Box::new(|| suite("precise_invariance", 10_000))),
        ("9 resolution", Duration::from_secs(30), Box::new(resolution)),
        ("10 determinism", Duration::from_secs(600), Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, limit, check) in &criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let ok = v.ok && elapsed <= *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} ({:.2} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
