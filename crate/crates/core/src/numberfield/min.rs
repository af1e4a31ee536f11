//! Exact minimum of `|Nm(x)|` over the nonzero elements of a fractional ideal.

use num_rational::BigRational;
use num_traits::Signed;

use super::enumerate::{enumerate_box, reduce_basis, DEFAULT_BOX_CAP};
use super::field::FieldElement;
use super::ideal::FractionalIdeal;
use super::units::unit_group;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// `min |Nm(x)|` over nonzero `x` in the ideal, with a minimizing element.
///
/// Quadratic fields only. Multiplying by powers of the totally positive unit
/// moves any element into the region where `|sigma_1(x) / sigma_2(x)|` lies
/// between `u^{-1/2}` and `u^{1/2}`, `u = sigma_1(eps+)^2`. That region is cut
/// into slices on which a norm bound gives a compact box, and every box is
/// enumerated with exact norm evaluation.
pub fn ideal_min_with_witness(ideal: &FractionalIdeal) -> Result<(BigRational, FieldElement)> {
    let field = ideal.field();
    if field.degree() != 2 {
        return Err(Error::UnsupportedDegree {
            degree: field.degree(),
            reason: "norm minimum enumeration is implemented for quadratic fields",
        });
    }
    let units = unit_group(field)?;
    let eps = units.quadratic_generator()?;

    // Initial upper bound from a reduced basis.
    let reduced = reduce_basis(field, &ideal.basis(), &[1.0, 1.0]);
    let candidates = [
        reduced[0].clone(),
        reduced[1].clone(),
        &reduced[0] + &reduced[1],
        &reduced[0] - &reduced[1],
    ];
    let mut best = candidates
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| (x.norm().abs(), x.clone()))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("a basis element is nonzero");

    let s1 = field.embed_interval(eps)[0];
    let log_u = (s1 * s1).ln();
    let slices = (log_u.hi / 4f64.ln()).ceil().max(1.0) as usize;
    let basis = ideal.basis();
    for k in 0..slices {
        let start = Interval::exact(k as f64) / Interval::exact(slices as f64) - Interval::exact(0.5);
        let end = Interval::exact((k + 1) as f64) / Interval::exact(slices as f64) - Interval::exact(0.5);
        let r_lo = Interval::exact((start * log_u).lo).exp().lo;
        let r_hi = Interval::exact((end * log_u).hi).exp().hi;
        let n0 = Interval::from_rational(&best.0);
        let b1 = (n0 * Interval::exact(r_hi)).sqrt().hi;
        let b2 = (n0 / Interval::exact(r_lo)).sqrt().hi;
        let bounds = [
            BigRational::from_float(b1).expect("finite bound"),
            BigRational::from_float(b2).expect("finite bound"),
        ];
        for x in enumerate_box(field, &basis, &bounds, DEFAULT_BOX_CAP)? {
            if x.is_zero() {
                continue;
            }
            let nm = x.norm().abs();
            if nm < best.0 || (nm == best.0 && x.coords() < best.1.coords()) {
                best = (nm, x);
            }
        }
    }
    assert!(best.0 >= ideal.norm(), "norm minimum below the ideal norm");
    Ok(best)
}

pub fn ideal_min(ideal: &FractionalIdeal) -> Result<BigRational> {
    ideal_min_with_witness(ideal).map(|(m, _)| m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::TotallyRealField;
    use crate::rational::int;

    /// Oracle: scan a coordinate box over the ideal basis directly.
    fn brute_min(ideal: &FractionalIdeal, range: i64) -> BigRational {
        let b = ideal.basis();
        let mut best: Option<BigRational> = None;
        for i in -range..=range {
            for j in -range..=range {
                if i == 0 && j == 0 {
                    continue;
                }
                let x = &b[0].scale(&int(i)) + &b[1].scale(&int(j));
                let nm = x.norm().abs();
                if best.as_ref().is_none_or(|m| &nm < m) {
                    best = Some(nm);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn examples() {
        let f = TotallyRealField::quadratic(5).unwrap();
        assert_eq!(ideal_min(&FractionalIdeal::unit(&f)).unwrap(), int(1));
        let s5 = FractionalIdeal::principal(&f.element_from_ints(&[-1, 2])).unwrap();
        assert_eq!(ideal_min(&s5).unwrap(), int(5));
        let two = FractionalIdeal::from_int(&f, 2).unwrap();
        assert_eq!(ideal_min(&two).unwrap(), int(4));
    }

    #[test]
    fn agrees_with_brute_force() {
        for d in [2, 3, 5, 13, 10, 15] {
            let f = TotallyRealField::quadratic(d).unwrap();
            for (a, b) in [(2, 0), (3, 1), (5, 2), (7, 3), (1, 1), (6, 4)] {
                let x = f.element_from_ints(&[a, b]);
                let y = f.element_from_ints(&[b + 1, 1]);
                let ideal = FractionalIdeal::from_generators(&f, &[x, y]).unwrap();
                assert_eq!(ideal_min(&ideal).unwrap(), brute_min(&ideal, 40), "d = {d}, ({a}, {b})");
            }
        }
    }

    #[test]
    fn non_principal_ideal_in_class_number_two() {
        // Q(sqrt10) has class number 2; (2, sqrt10) is not principal.
        let f = TotallyRealField::quadratic(10).unwrap();
        let p = FractionalIdeal::from_generators(&f, &[f.from_int(2), f.element_from_ints(&[0, 1])]).unwrap();
        assert_eq!(p.norm(), int(2));
        let m = ideal_min(&p).unwrap();
        assert!(m > int(2));
        assert_eq!(m, brute_min(&p, 40));
    }

    #[test]
    fn fractional_ideal_scales() {
        let f = TotallyRealField::quadratic(2).unwrap();
        let half = FractionalIdeal::from_int(&f, 2).unwrap().inverse().unwrap();
        assert_eq!(ideal_min(&half).unwrap(), crate::rational::rat(1, 4));
    }

    #[test]
    fn cubic_unsupported() {
        let c: Vec<num_bigint::BigInt> = [1, -3, 0, 1].iter().map(|&x| x.into()).collect();
        let basis = crate::linalg::to_rat(&crate::linalg::identity_int(3));
        let f = TotallyRealField::new(&c, Some(basis)).unwrap();
        assert!(matches!(
            ideal_min(&FractionalIdeal::unit(&f)),
            Err(Error::UnsupportedDegree { degree: 3, .. })
        ));
    }
}
