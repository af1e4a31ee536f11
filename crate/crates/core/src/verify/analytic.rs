//! Suites with a floating-point side: Hessians, volumes, thresholds, sampling on `H^n`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{rng_for, SuiteResult, Tally};
use crate::congruence::{Flavor, GroupElement, GroupSpec};
use crate::cusps::CoverVariant;
use crate::hyperbolic::{dist_hn, horoball_contains, normalized_volume_profile, psh_hessian, HPoint, Isometry, TestCurve};
use crate::numberfield::{FractionalIdeal, TotallyRealField};
use crate::thresholds::{
    ample_threshold, general_type_threshold, green_griffiths_threshold, nef_slope_coefficient, nef_slope_zero,
};

pub(crate) fn psh() -> SuiteResult {
    let mut t = Tally::new("psh");
    for n in 2..=8usize {
        let critical = BigRational::new(BigInt::from(1), BigInt::from(n));
        match psh_hessian(&critical, n) {
            Ok(h) => {
                let rest = BigRational::new(BigInt::from(n), BigInt::from(n - 1));
                t.check(h.psd && h.zero_eigenvalues() == 1, || format!("n = {n}: t = 1/n not PSD with one zero eigenvalue"));
                t.check(h.eigenvalues[1..].iter().all(|e| e == &rest), || format!("n = {n}: eigenvalues {:?}", h.eigenvalues));
                t.check(h.cross_check(), || format!("n = {n}: matrix disagrees with the closed-form spectrum"));
            }
            Err(e) => t.error(&format!("n = {n}"), &e),
        }
        let past = critical + BigRational::new(BigInt::from(1), BigInt::from(100));
        match psh_hessian(&past, n) {
            Ok(h) => {
                t.check(!h.psd && h.cross_check(), || format!("n = {n}: t = 1/n + 1/100 is PSD"));
            }
            Err(e) => t.error(&format!("n = {n}"), &e),
        }
    }
    t.finish()
}

/// `k`-th of `count` log-spaced points in `[lo, hi]`.
fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}

pub(crate) fn volume(curves: &[TestCurve]) -> SuiteResult {
    let mut t = Tally::new("volume");
    let depths = log_spaced(0.1, 10.0, 50);
    let profiles: Vec<_> = curves.par_iter().map(|c| normalized_volume_profile(c, &depths)).collect();
    for (curve, profile) in curves.iter().zip(profiles) {
        let profile = match profile {
            Ok(p) => p,
            Err(e) => {
                t.error(&format!("curve {}", curve.name), &e);
                continue;
            }
        };
        let values: Vec<f64> = profile.iter().map(|(_, v)| v.value).collect();
        for (k, w) in values.windows(2).enumerate() {
            let tol = 1e-6 * w[0].abs().max(1.0);
            t.margin(w[1] - w[0] + tol);
            t.check(w[1] >= w[0] - tol, || {
                format!("curve {}: decreases between s = {} and {}: {} > {}", curve.name, depths[k], depths[k + 1], w[0], w[1])
            });
        }
        if curve.is_linear_geodesic() {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            t.check(hi - lo <= 1e-6 * hi.abs().max(1.0), || format!("curve {}: spread {} on a geodesic", curve.name, hi - lo));
        }
        t.note(format!("{}: {} at s = 0.1, {} at s = 10", curve.name, values[0], values[values.len() - 1]));
    }
    t.finish()
}

pub(crate) fn thresholds() -> SuiteResult {
    let mut t = Tally::new("thresholds");
    let one = BigRational::from_integer(1.into());
    match ample_threshold(2, &one) {
        Ok(a) => {
            let pi4 = std::f64::consts::PI.powi(4);
            let rel = (a.value().mid() / pi4 - 1.0).abs();
            t.margin(1e-12 - rel);
            t.check(rel <= 1e-12 && a.value().contains(pi4), || format!("ample_threshold(2, 1) = {} not pi^4", a.value().mid()));
        }
        Err(e) => t.error("ample_threshold(2, 1)", &e),
    }
    for n in 2..=8u32 {
        let nq = BigRational::from_integer(n.into());
        match (green_griffiths_threshold(n), ample_threshold(n, &nq)) {
            (Ok(g), Ok(a)) => t.check(g == a, || format!("n = {n}: Green-Griffiths threshold {g} vs {a}")),
            (Err(e), _) | (_, Err(e)) => t.error(&format!("n = {n}"), &e),
        }
        match (general_type_threshold(n), ample_threshold(n, &one)) {
            (Ok(g), Ok(a)) => t.check(g == a, || format!("n = {n}: general type threshold {g} vs {a}")),
            (Err(e), _) | (_, Err(e)) => t.error(&format!("n = {n}"), &e),
        }
        for variant in [CoverVariant::Torsion, CoverVariant::Principal] {
            match nef_slope_zero(n, variant) {
                Ok(zero) => {
                    let z = zero.value().mid();
                    let at = |x: f64| {
                        BigRational::from_float(x).and_then(|q| nef_slope_coefficient(n, &q, variant).ok())
                    };
                    match (at(z), at(z * (1.0 - 1e-6)), at(z * (1.0 + 1e-6))) {
                        (Some(c0), Some(below), Some(above)) => {
                            t.check(c0.mid().abs() <= 1e-10, || format!("n = {n} {variant:?}: coefficient {} at the zero", c0.mid()));
                            t.check(below.is_positive() && above.is_negative(), || {
                                format!("n = {n} {variant:?}: no sign change at {z}")
                            });
                        }
                        _ => t.check(false, || format!("n = {n} {variant:?}: cannot evaluate near {z}")),
                    }
                    if variant == CoverVariant::Torsion {
                        match ample_threshold(n, &one) {
                            Ok(a) => t.check(a == zero, || format!("n = {n}: slope zero {zero} vs ample threshold {a}")),
                            Err(e) => t.error(&format!("n = {n}"), &e),
                        }
                    }
                }
                Err(e) => t.error(&format!("n = {n}"), &e),
            }
        }
    }
    match general_type_threshold(6) {
        Ok(g) => {
            let v = g.value();
            t.check(v.hi < 2.0, || format!("general_type_threshold(6) = {} is not below 2", v.mid()));
            t.note(format!("general_type_threshold(6) = {}", v.mid()));
        }
        Err(e) => t.error("general_type_threshold(6)", &e),
    }
    t.finish()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> HPoint {
    let coords = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-2.3f64..2.3).exp()))
        .collect();
    HPoint::new(coords).expect("positive imaginary parts")
}

/// A point with `N(z) > 1/s`, spread over many horoball shapes.
fn random_point_in_horoball(rng: &mut ChaCha8Rng, n: usize, s: f64) -> HPoint {
    loop {
        let mut logs: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let total: f64 = logs.iter().sum();
        let target = -s.ln() + rng.gen_range(0.0..4.0);
        let shift = (target - total) / n as f64;
        logs.iter_mut().for_each(|l| *l += shift);
        let coords = logs.iter().map(|l| Complex64::new(rng.gen_range(-3.0..3.0), l.exp())).collect();
        let z = HPoint::new(coords).expect("positive imaginary parts");
        if horoball_contains(s, &z) {
            return z;
        }
    }
}

pub(crate) fn precise_invariance(seed: u64) -> SuiteResult {
    let mut t = Tally::new("precise_invariance");
    let f = TotallyRealField::quadratic(5).expect("built-in field");
    let o = FractionalIdeal::unit(&f);
    let groups = [
        ("full", GroupSpec::full(&f), 2i64),
        ("gamma0((2))", GroupSpec::new(o.clone(), FractionalIdeal::from_int(&f, 2).expect("nonzero"), Flavor::Gamma0).expect("valid"), 3),
    ];
    let per_group = 5_000;
    for (stream, (name, group, height)) in groups.into_iter().enumerate() {
        let height = BigRational::from_integer(height.into());
        let elements: Vec<GroupElement> = match group.enumerate_elements(&height, crate::numberfield::DEFAULT_BOX_CAP) {
            Ok(e) => e.into_iter().filter(|g| !g.c.is_zero()).collect(),
            Err(e) => {
                t.error(name, &e);
                continue;
            }
        };
        let s = match elements.iter().map(|g| g.c.norm().abs()).min() {
            Some(s) => s,
            None => {
                t.check(false, || format!("{name}: no element with c != 0 in the box"));
                continue;
            }
        };
        let s_f = s.to_f64().unwrap_or(f64::NAN);
        t.note(format!("{name}: s = {s_f} from {} elements with c != 0", elements.len()));
        let isos: Vec<(Isometry, f64)> = elements
            .iter()
            .map(|g| (Isometry::from_group_element(g), g.c.to_f64().iter().map(|c| c.abs()).product()))
            .collect();
        let mut rng = rng_for(seed, "precise_invariance", stream as u64);
        for _ in 0..per_group {
            let (g, c_norm) = &isos[rng.gen_range(0..isos.len())];
            let z = random_point_in_horoball(&mut rng, 2, s_f);
            let w = g.apply(&z);
            let bound = 1.0 / c_norm;
            let slack = 1.0 - w.height() / bound;
            t.margin(slack);
            t.check(w.height() <= bound * (1.0 + 1e-9), || {
                format!("{name}: N(gz) = {} above 1/prod|c| = {bound} at {:?}", w.height(), z.coords())
            });
        }
    }
    t.finish()
}

fn random_isometry(rng: &mut ChaCha8Rng, n: usize) -> Isometry {
    let factors = (0..n)
        .map(|_| {
            let a: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let b: f64 = rng.gen_range(-2.0..2.0);
            let c: f64 = rng.gen_range(-2.0..2.0);
            [[a, b], [c, (1.0 + b * c) / a]]
        })
        .collect();
    Isometry::new(factors).expect("determinant one by construction")
}

pub(crate) fn metric(seed: u64) -> SuiteResult {
    let mut t = Tally::new("metric");
    let mut rng = rng_for(seed, "metric", 0);
    for k in 0..10_000 {
        let n = 1 + k % 3;
        let (a, b, c) = (random_point(&mut rng, n), random_point(&mut rng, n), random_point(&mut rng, n));
        let (ab, ba, bc, ac) = (dist_hn(&a, &b), dist_hn(&b, &a), dist_hn(&b, &c), dist_hn(&a, &c));
        t.check((ab - ba).abs() <= 1e-10, || format!("asymmetric: {ab} vs {ba}"));
        t.margin(ab + bc - ac + 1e-10);
        t.check(ac <= ab + bc + 1e-10, || format!("triangle: {ac} > {ab} + {bc}"));
        let g = random_isometry(&mut rng, n);
        let moved = dist_hn(&g.apply(&a), &g.apply(&b));
        t.check((moved - ab).abs() <= 1e-9 * ab.max(1.0), || format!("isometry moved distance {ab} to {moved}"));
    }
    t.finish()
}
