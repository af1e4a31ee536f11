//! Exact suites: ideals, depth, congruence groups, superadditivity, fans, Lelong numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{rng_for, FanFixture, Tally};
use crate::congruence::{Flavor, GroupElement, GroupSpec};
use crate::cusps::{depth_product_bound, normalized_norm_form, Cusp};
use crate::error::Result;
use crate::numberfield::{ideal_min, unit_group, FieldElement, FractionalIdeal, TotallyRealField};
use crate::rational::format_rational;
use crate::toroidal::{
    cusp_resolution_fan, lelong_from_liminf, lelong_number, radial_liminf_estimate, stratum_liminf, Cone,
};

/// Discriminant radicands of the fields the randomized suites run over.
pub(crate) const SUITE_FIELDS: [i64; 3] = [2, 3, 5];

fn field(d: i64) -> TotallyRealField {
    TotallyRealField::quadratic(d).expect("built-in quadratic field")
}

fn random_element(f: &TotallyRealField, rng: &mut ChaCha8Rng, r: i64) -> FieldElement {
    let coords: Vec<i64> = (0..f.degree()).map(|_| rng.gen_range(-r..=r)).collect();
    f.element_from_ints(&coords)
}

fn random_nonzero(f: &TotallyRealField, rng: &mut ChaCha8Rng, r: i64) -> FieldElement {
    loop {
        let x = random_element(f, rng, r);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A two-generator ideal, fractional about a third of the time.
fn random_ideal(f: &TotallyRealField, rng: &mut ChaCha8Rng) -> FractionalIdeal {
    let x = random_nonzero(f, rng, 12);
    let y = random_element(f, rng, 12);
    let ideal = FractionalIdeal::from_generators(f, &[x, y]).expect("nonzero generators");
    if rng.gen_bool(0.3) {
        let k = rng.gen_range(2..=6i64);
        ideal.scale(&f.from_rational(&BigRational::new(BigInt::one(), k.into()))).expect("nonzero scalar")
    } else {
        ideal
    }
}

fn same_lattice(i: &FractionalIdeal, j: &FractionalIdeal) -> bool {
    i.basis().iter().all(|x| j.contains(x)) && j.basis().iter().all(|x| i.contains(x))
}

fn rel_margin(lhs: &BigRational, rhs: &BigRational) -> f64 {
    if rhs.is_zero() {
        return lhs.to_f64().unwrap_or(f64::INFINITY);
    }
    (lhs / rhs - BigRational::one()).to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn ideals(seed: u64) -> super::SuiteResult {
    let mut t = Tally::new("ideals");
    for (stream, d) in SUITE_FIELDS.into_iter().enumerate() {
        let f = field(d);
        let mut rng = rng_for(seed, "ideals", stream as u64);
        for k in 0..200 {
            let i = random_ideal(&f, &mut rng);
            let j = random_ideal(&f, &mut rng);
            let label = || format!("Q(sqrt {d}) pair {k}: I = {i}, J = {j}");
            match (i.intersect(&j).inverse(), i.inverse(), j.inverse()) {
                (Ok(lhs), Ok(ii), Ok(ji)) => t.check(lhs == ii.sum(&ji), || format!("inverse of intersection, {}", label())),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => t.error(&label(), &e),
            }
            let s = i.sum(&j);
            t.check(s.product(&s) == i.product(&i).sum(&j.product(&j)), || format!("square of sum, {}", label()));
            t.check(i.product(&j).norm() == i.norm() * j.norm(), || format!("norm multiplicativity, {}", label()));

            // HNF canonicity: a different generating set of the same lattice,
            // and an unrelated ideal compared both ways.
            let basis = i.basis();
            let m = random_element(&f, &mut rng, 5);
            let shuffled = [&basis[1] + &(&basis[0] * &m), basis[0].clone(), &basis[0] * &m];
            match FractionalIdeal::from_generators(&f, &shuffled) {
                Ok(i2) => t.check(i2 == i && same_lattice(&i2, &i), || format!("regenerated ideal differs, {}", label())),
                Err(e) => t.error(&label(), &e),
            }
            t.check((i == j) == same_lattice(&i, &j), || format!("equality disagrees with containment, {}", label()));

            let x = random_element(&f, &mut rng, 30);
            let y = random_element(&f, &mut rng, 30);
            t.check((&x * &y).norm() == x.norm() * y.norm(), || format!("element norm multiplicativity at {x}, {y}"));
        }
        // The norm minimum is the costliest operation here; a smaller sample.
        for k in 0..30 {
            let i = random_ideal(&f, &mut rng);
            match ideal_min(&i) {
                Ok(m) => {
                    t.margin(rel_margin(&m, &i.norm()));
                    t.check(m >= i.norm(), || format!("Q(sqrt {d}) min {k}: {} < Nm {}", format_rational(&m), i));
                }
                Err(e) => t.error("ideal_min", &e),
            }
            let x = random_nonzero(&f, &mut rng, 30);
            match FractionalIdeal::principal(&x).and_then(|p| ideal_min(&p)) {
                Ok(m) => t.check(m <= x.norm().abs(), || format!("principal min above generator norm at {x}")),
                Err(e) => t.error("ideal_min", &e),
            }
        }
    }
    t.finish()
}

fn random_level(f: &TotallyRealField, rng: &mut ChaCha8Rng, max_norm: i64) -> FractionalIdeal {
    let bound = BigRational::from_integer(max_norm.into());
    loop {
        let x = random_nonzero(f, rng, 60);
        let y = if rng.gen_bool(0.3) { random_element(f, rng, 60) } else { f.zero() };
        let level = FractionalIdeal::from_generators(f, &[x, y]).expect("nonzero generator");
        if level.norm() <= bound {
            return level;
        }
    }
}

fn random_cusp(f: &TotallyRealField, rng: &mut ChaCha8Rng) -> Cusp {
    if rng.gen_ratio(1, 8) {
        return Cusp::infinity(f);
    }
    loop {
        let a = random_element(f, rng, 6);
        let b = random_element(f, rng, 6);
        if let Ok(c) = Cusp::new(a, b) {
            return c;
        }
    }
}

pub(crate) fn depth(seed: u64) -> super::SuiteResult {
    let mut t = Tally::new("depth");
    for (stream, d) in SUITE_FIELDS.into_iter().enumerate() {
        let f = field(d);
        let mut rng = rng_for(seed, "depth", stream as u64);
        let mut done = 0;
        while done < 100 {
            let level = random_level(&f, &mut rng, 10_000);
            let flavor = match rng.gen_range(0..4) {
                0 => Flavor::Gamma1,
                1 => Flavor::Full,
                _ => Flavor::Gamma0,
            };
            let module = if rng.gen_bool(0.25) {
                FractionalIdeal::from_int(&f, rng.gen_range(2..=3)).expect("nonzero")
            } else {
                FractionalIdeal::unit(&f)
            };
            let group = match GroupSpec::new(module, level.clone(), flavor) {
                Ok(g) => g,
                Err(e) => {
                    t.error("group", &e);
                    done += 1;
                    continue;
                }
            };
            let first = random_cusp(&f, &mut rng);
            let second = random_cusp(&f, &mut rng);
            if first == second {
                continue;
            }
            done += 1;
            let label = || format!("Q(sqrt {d}) {} level {level}: {first:?}, {second:?}", flavor.name());
            match depth_product_bound(&first, &second, &group) {
                Ok(r) => {
                    t.margin(r.margin());
                    t.check(r.bound_holds(), || {
                        format!("{}: P = {} < {}", label(), format_rational(&r.product), format_rational(&r.level_norm))
                    });
                    t.check(r.containment_holds, || format!("{}: containment fails", label()));
                    match normalized_norm_form(&r.lattice_at_first).and_then(|s| {
                        let inv = s.shortest.inverse().expect("nonzero");
                        ideal_min(&s.lattice.scale(&inv)?)
                    }) {
                        Ok(m) => t.check(m.is_one(), || format!("{}: rescaled minimum {}", label(), format_rational(&m))),
                        Err(e) => t.error(&label(), &e),
                    }
                }
                Err(e) => t.error(&label(), &e),
            }
            let c = random_nonzero(&f, &mut rng, 9);
            match Cusp::new(&c * first.alpha(), &c * first.beta()) {
                Ok(scaled) => t.check(scaled == first, || format!("{first:?} rescaled by {c} is {scaled:?}")),
                Err(e) => t.error("cusp rescaling", &e),
            }
        }
    }
    t.finish()
}

pub(crate) fn congruence(seed: u64) -> super::SuiteResult {
    let mut t = Tally::new("congruence");
    let mut rng = rng_for(seed, "congruence", 0);
    let f = field(5);
    let o = FractionalIdeal::unit(&f);
    let height = BigRational::from_integer(3.into());
    let gamma0 = |k: i64| GroupSpec::new(o.clone(), FractionalIdeal::from_int(&f, k).expect("nonzero"), Flavor::Gamma0);

    match gamma0(2).and_then(|g| Ok((g.enumerate_elements(&height, crate::numberfield::DEFAULT_BOX_CAP)?, g))) {
        Ok((elements, g)) => {
            t.note(format!("closure sample from {} enumerated elements of Gamma0((2))", elements.len()));
            for _ in 0..100 {
                let x = &elements[rng.gen_range(0..elements.len())];
                let y = &elements[rng.gen_range(0..elements.len())];
                let p: GroupElement = x.mul(y);
                t.check(matches!(g.is_member(&p), Ok(true)), || format!("{x:?} * {y:?} left the group"));
            }
        }
        Err(e) => t.error("Gamma0((2)) enumeration", &e),
    }

    // Trace argument: with |Nm n| > 4^n the small-eigenvalue elements are unipotent.
    let two = BigRational::from_integer(2.into());
    match GroupSpec::new(o.clone(), FractionalIdeal::from_int(&f, 5).expect("nonzero"), Flavor::Gamma1)
        .and_then(|g| g.enumerate_elements(&BigRational::from_integer(8.into()), crate::numberfield::DEFAULT_BOX_CAP))
    {
        Ok(elements) => {
            let mut small = 0;
            for g in &elements {
                if g.is_identity() {
                    continue;
                }
                let tr = g.trace();
                let bounded = (0..2).all(|i| {
                    f.cmp_at_rational(&tr, &two, i) != std::cmp::Ordering::Greater
                        && f.cmp_at_rational(&tr, &-two.clone(), i) != std::cmp::Ordering::Less
                });
                if bounded {
                    small += 1;
                    t.check(g.is_unipotent(), || format!("{g:?} has small eigenvalues but is not unipotent"));
                }
            }
            t.note(format!("Gamma1((5)): {} elements, {small} with all eigenvalues of modulus <= 1", elements.len()));
        }
        Err(e) => t.error("Gamma1((5)) enumeration", &e),
    }

    // Antitone in the level along O ⊃ (2) ⊃ (4) and O ⊃ (3) ⊃ (6).
    for chain in [[1i64, 2, 4], [1, 3, 6]] {
        let mins: Vec<Option<BigRational>> = chain
            .iter()
            .map(|&k| gamma0(k).and_then(|g| g.min_lower_left_norm_default(&height)).ok().flatten())
            .collect();
        for w in mins.windows(2) {
            let ok = match (&w[0], &w[1]) {
                (Some(a), Some(b)) => b >= a,
                (_, None) => true,
                (None, Some(_)) => false,
            };
            t.check(ok, || format!("level chain {chain:?}: minima {mins:?}"));
        }
    }
    t.finish()
}

fn random_totally_positive(f: &TotallyRealField, lattice: &FractionalIdeal, rng: &mut ChaCha8Rng) -> FieldElement {
    let basis = lattice.basis();
    loop {
        let x = basis.iter().fold(f.zero(), |acc, b| acc + b.scale(&BigRational::from_integer(rng.gen_range(-40..=40i64).into())));
        if f.is_totally_positive(&x) {
            return x;
        }
    }
}

pub(crate) fn superadditivity(seed: u64) -> super::SuiteResult {
    let mut t = Tally::new("superadditivity");
    for (stream, d) in SUITE_FIELDS.into_iter().enumerate() {
        let f = field(d);
        let mut rng = rng_for(seed, "superadditivity", stream as u64);
        for _ in 0..500 {
            let lattice = random_ideal(&f, &mut rng);
            let x = random_totally_positive(&f, &lattice, &mut rng);
            let y = random_totally_positive(&f, &lattice, &mut rng);
            let lhs = (&x + &y).norm();
            let rhs = x.norm() + y.norm();
            t.margin(rel_margin(&lhs, &rhs));
            t.check(lhs >= rhs, || format!("Q(sqrt {d}): Nm({x} + {y}) below the sum of norms"));
        }
    }
    t.finish()
}

pub(crate) fn resolution(fixtures: &[FanFixture]) -> super::SuiteResult {
    let mut t = Tally::new("resolution");
    for d in [2i64, 3, 5, 13] {
        let f = field(d);
        let fan = unit_group(&f)
            .and_then(|u| cusp_resolution_fan(&FractionalIdeal::unit(&f), &u.totally_positive[0]));
        match fan {
            Ok(fan) => {
                let check = fan.check();
                let cycle: Vec<String> = fan.cycle().unwrap_or(&[]).iter().map(BigInt::to_string).collect();
                t.note(format!("Q(sqrt {d}): cycle [{}]", cycle.join(", ")));
                t.check(check.passed() && check.cycle_consistent == Some(true) && check.invariant == Some(true), || {
                    format!("Q(sqrt {d}) resolution: {:?}", check.problems)
                });
            }
            Err(e) => t.error(&format!("Q(sqrt {d}) resolution"), &e),
        }
    }
    for fx in fixtures {
        let built = fx.field.build().and_then(|f| fx.fan.build(&f));
        match built {
            Ok(fan) => {
                let check = fan.check();
                t.check(check.passed(), || format!("fixture {}: {:?}", fx.name, check.problems));
            }
            Err(e) => t.error(&format!("fixture {}", fx.name), &e),
        }
    }
    t.finish()
}

/// Top cones of resolution fans over several fields and lattices, with the
/// lattice they live in, `count` in total.
fn lelong_cones(count: usize) -> Result<Vec<(String, Cone, FractionalIdeal)>> {
    let mut out = Vec::new();
    'fields: for d in [5i64, 2, 3, 13, 6, 7, 10, 21] {
        let f = field(d);
        let unit = unit_group(&f)?.totally_positive[0].clone();
        for k in [1i64, 2] {
            let lattice = FractionalIdeal::from_int(&f, k)?;
            let fan = cusp_resolution_fan(&lattice, &unit)?;
            for (j, c) in fan.cones().iter().enumerate().take(2) {
                out.push((format!("Q(sqrt {d}) ({k}) cone {j}"), c.clone(), lattice.clone()));
                if out.len() == count {
                    break 'fields;
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn lelong(seed: u64) -> super::SuiteResult {
    let mut t = Tally::new("lelong");
    let mut rng = rng_for(seed, "lelong", 0);
    let cones = match lelong_cones(20) {
        Ok(c) => c,
        Err(e) => {
            t.error("building cone fixtures", &e);
            return t.finish();
        }
    };
    let radii: Vec<f64> = (1..=40).map(|k| -(k as f64) * 15.0).collect();
    for (name, cone, lattice) in &cones {
        let form = match normalized_norm_form(lattice) {
            Ok(f) => f,
            Err(e) => {
                t.error(name, &e);
                continue;
            }
        };
        let n = cone.dimension();
        let scalar = form.scalar.mid();
        let emb: Vec<Vec<f64>> = cone.generators().iter().map(|g| g.to_f64()).collect();
        // exponents[j][i]: normalized j-th embedding of generator i.
        let exponents: Vec<Vec<f64>> = (0..n).map(|j| emb.iter().map(|e| e[j] * scalar).collect()).collect();
        let dirs: Vec<Vec<f64>> = (0..16)
            .map(|_| {
                let a = rng.gen_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
                vec![a.cos(), a.sin()]
            })
            .collect();
        let top = match lelong_number(cone, &form) {
            Ok(v) => v,
            Err(e) => {
                t.error(name, &e);
                continue;
            }
        };
        let symbolic = top.value.mid();
        let closed = lelong_from_liminf(stratum_liminf(&exponents, &[true, true]), n);
        t.check((closed / symbolic - 1.0).abs() < 1e-9, || format!("{name}: closed form {closed} vs {symbolic}"));
        let numeric = lelong_from_liminf(radial_liminf_estimate(&exponents, &[0.0, 0.0], &dirs, &radii), n);
        let err = (numeric / symbolic - 1.0).abs();
        t.margin(0.05 - err);
        t.check(err < 0.05, || format!("{name} at the torus fixed point: numeric {numeric} vs {symbolic}"));

        // Off the fixed point, on the divisor of the first ray.
        let face = match Cone::new(vec![cone.generators()[0].clone()]).and_then(|c| lelong_number(&c, &form)) {
            Ok(v) => v,
            Err(e) => {
                t.error(name, &e);
                continue;
            }
        };
        let symbolic = face.value.mid();
        let numeric = lelong_from_liminf(radial_liminf_estimate(&exponents, &[0.0, 0.5], &dirs, &radii), n);
        let err = (numeric / symbolic - 1.0).abs();
        t.margin(0.05 - err);
        t.check(err < 0.05, || format!("{name} on a divisor: numeric {numeric} vs {symbolic}"));
        t.check(top.normalized_norm > face.normalized_norm, || format!("{name}: no increase from ray to cone"));
        let reversed = Cone::new(cone.generators().iter().rev().cloned().collect()).and_then(|c| lelong_number(&c, &form));
        t.check(reversed.as_ref().ok() == Some(&top), || format!("{name}: depends on generator order"));
    }
    t.note(format!("{} cones", cones.len()));
    t.finish()
}
