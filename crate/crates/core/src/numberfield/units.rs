use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::field::{FieldElement, TotallyRealField};
use crate::error::{Error, Result};
use crate::linalg;

/// Bound on continued-fraction steps when searching for a quadratic unit.
const MAX_CF_STEPS: usize = 20_000;

/// Generators of the unit group modulo torsion and of its totally positive part.
#[derive(Clone, Debug)]
pub struct UnitGroupData {
    pub fundamental: Vec<FieldElement>,
    pub totally_positive: Vec<FieldElement>,
}

#[derive(Serialize)]
pub struct UnitReport {
    pub fundamental: Vec<Vec<String>>,
    pub fundamental_norms: Vec<String>,
    pub totally_positive: Vec<Vec<String>>,
    pub totally_positive_embeddings: Vec<Vec<f64>>,
}

impl UnitGroupData {
    pub fn report(&self) -> UnitReport {
        UnitReport {
            fundamental: self.fundamental.iter().map(|u| u.coords_strings()).collect(),
            fundamental_norms: self.fundamental.iter().map(|u| crate::rational::format_rational(&u.norm())).collect(),
            totally_positive: self.totally_positive.iter().map(|u| u.coords_strings()).collect(),
            totally_positive_embeddings: self.totally_positive.iter().map(|u| u.to_f64()).collect(),
        }
    }

    /// The single generator `eps+` of a quadratic field, with `sigma_1(eps+) > 1`.
    pub fn quadratic_generator(&self) -> Result<&FieldElement> {
        match self.totally_positive.as_slice() {
            [u] => Ok(u),
            other => Err(Error::UnsupportedDegree {
                degree: other.len() + 1,
                reason: "a single totally positive generator exists only for quadratic fields",
            }),
        }
    }
}

/// Fundamental unit of a real quadratic field, normalized so that
/// `sigma_1(eps) > 1` and `sigma_2(eps)` has absolute value below one.
///
/// Every unit `p - q w` with `q > 0` and `|sigma_1|` small yields a
/// convergent `p/q` of `sigma_1(w)`; the first convergent of unit norm gives
/// the fundamental unit up to sign and inversion.
pub fn quadratic_fundamental_unit(field: &TotallyRealField) -> Result<FieldElement> {
    if field.degree() != 2 {
        return Err(Error::UnsupportedDegree { degree: field.degree(), reason: "units are computed only for quadratic fields" });
    }
    let w = field.basis_element(1);
    let one = field.one();
    let mut x = w.clone();
    let (mut p_prev, mut q_prev) = (BigInt::zero(), BigInt::one());
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    for _ in 0..MAX_CF_STEPS {
        let a = field.floor_ratio_at(&x, &one, 0);
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        let candidate = &field.from_rational(&BigRational::from_integer(p.clone()))
            - &w.scale(&BigRational::from_integer(q.clone()));
        if candidate.norm().abs().is_one() {
            return Ok(normalize_quadratic(field, candidate));
        }
        let frac = &x - &field.from_rational(&BigRational::from_integer(a));
        x = frac.inverse().ok_or_else(|| Error::Precondition("basis element is rational".into()))?;
    }
    Err(Error::Precondition("continued fraction did not reach a unit".into()))
}

fn normalize_quadratic(field: &TotallyRealField, u: FieldElement) -> FieldElement {
    let mut u = u;
    if field.sign_at(&u, 0) == Ordering::Less {
        u = -u;
    }
    if field.cmp_at(&u, &field.one(), 0) == Ordering::Less {
        u = u.inverse().expect("unit");
    }
    u
}

/// Unit data: computed for quadratic fields, taken from configuration otherwise.
pub fn unit_group(field: &TotallyRealField) -> Result<UnitGroupData> {
    let fundamental: Vec<FieldElement> = if !field.supplied_units().is_empty() {
        field.supplied_units().iter().map(|c| field.element(c.clone())).collect::<Result<_>>()?
    } else if field.degree() == 2 {
        vec![quadratic_fundamental_unit(field)?]
    } else {
        return Err(Error::UnsupportedDegree {
            degree: field.degree(),
            reason: "fundamental units must be supplied for degree >= 3",
        });
    };
    if fundamental.len() != field.degree() - 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} fundamental units, got {}",
            field.degree() - 1,
            fundamental.len()
        )));
    }
    let totally_positive = if !field.supplied_totally_positive_units().is_empty() {
        field
            .supplied_totally_positive_units()
            .iter()
            .map(|c| field.element(c.clone()))
            .collect::<Result<_>>()?
    } else {
        totally_positive_generators(field, &fundamental)?
    };
    let mut totally_positive = totally_positive;
    if field.degree() == 2 {
        totally_positive = totally_positive.into_iter().map(|u| normalize_quadratic(field, u)).collect();
    }
    Ok(UnitGroupData { fundamental, totally_positive })
}

/// Alias with the name used in reports.
pub fn totally_positive_units(field: &TotallyRealField) -> Result<UnitGroupData> {
    unit_group(field)
}

/// Generators of the totally positive units from fundamental units: the
/// kernel of the sign map over F_2 together with all squares, reduced to a
/// basis of the exponent lattice.
pub fn totally_positive_generators(field: &TotallyRealField, fundamental: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let n = field.degree();
    let r = fundamental.len();
    // Columns: -1, eps_1, ..., eps_r; rows: embeddings. Entry 1 when negative.
    let mut cols: Vec<Vec<u8>> = vec![vec![1; n]];
    for u in fundamental {
        cols.push((0..n).map(|i| u8::from(field.sign_at(u, i) == Ordering::Less)).collect());
    }
    let kernel = f2_kernel(&cols, n);
    let mut exps: Vec<Vec<BigInt>> = (0..r)
        .map(|j| (0..r).map(|k| if j == k { BigInt::from(2) } else { BigInt::zero() }).collect())
        .collect();
    for v in kernel {
        exps.push(v[1..].iter().map(|&b| BigInt::from(b)).collect());
    }
    let basis = linalg::hnf(&exps);
    let mut out = Vec::with_capacity(basis.len());
    for row in basis {
        let mut u = field.one();
        for (e, k) in fundamental.iter().zip(&row) {
            let base = if k.is_negative() { e.inverse().expect("unit") } else { e.clone() };
            let k: u32 = k.abs().try_into().map_err(|_| Error::Precondition("unit exponent overflow".into()))?;
            u = &u * &base.pow(k);
        }
        if field.sign_at(&u, 0) == Ordering::Less {
            u = -u;
        }
        if !field.is_totally_positive(&u) {
            return Err(Error::NotAUnit(format!("{u} is not totally positive")));
        }
        out.push(u);
    }
    Ok(out)
}

/// Basis of `{v in F_2^k : sum_j v_j col_j = 0}`.
fn f2_kernel(cols: &[Vec<u8>], rows: usize) -> Vec<Vec<u8>> {
    let k = cols.len();
    // Row-reduce the rows x k matrix.
    let mut m: Vec<Vec<u8>> = (0..rows).map(|i| (0..k).map(|j| cols[j][i]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows).find(|&i| m[i][c] == 1) else { continue };
        m.swap(p, r);
        for i in 0..rows {
            if i != r && m[i][c] == 1 {
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; k];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][f];
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    /// Oracle: smallest solution of x^2 - d y^2 = +-1 by direct search,
    /// expressed as x + y sqrt(d).
    fn pell_search(d: i64) -> (i64, i64) {
        for y in 1..300_000i64 {
            for s in [-1i64, 1] {
                let t = d * y * y + s;
                let x = (t as f64).sqrt().round() as i64;
                if x > 0 && x * x == t {
                    return (x, y);
                }
            }
        }
        unreachable!()
    }

    fn sqrt_d(field: &TotallyRealField) -> FieldElement {
        field.from_power_coords(&[int(0), int(1)])
    }

    #[test]
    fn quadratic_units_match_examples() {
        let f5 = TotallyRealField::quadratic(5).unwrap();
        let e = quadratic_fundamental_unit(&f5).unwrap();
        assert_eq!(e, f5.basis_element(1)); // (1 + sqrt5)/2
        let data = unit_group(&f5).unwrap();
        assert_eq!(data.totally_positive[0], f5.element(vec![int(1), int(1)]).unwrap());

        let f2 = TotallyRealField::quadratic(2).unwrap();
        assert_eq!(quadratic_fundamental_unit(&f2).unwrap(), f2.element_from_ints(&[1, 1]));
        assert_eq!(unit_group(&f2).unwrap().totally_positive[0], f2.element_from_ints(&[3, 2]));

        let f3 = TotallyRealField::quadratic(3).unwrap();
        assert_eq!(unit_group(&f3).unwrap().totally_positive[0], f3.element_from_ints(&[2, 1]));
    }

    #[test]
    fn units_agree_with_pell_search() {
        for d in [2i64, 3, 6, 7, 10, 11, 14, 15, 19, 22, 23, 31, 46, 94] {
            let f = TotallyRealField::quadratic(d).unwrap();
            let e = quadratic_fundamental_unit(&f).unwrap();
            let (x, y) = pell_search(d);
            let r = sqrt_d(&f);
            let expected = &f.from_int(x) + &r.scale(&int(y));
            assert_eq!(e, expected, "d = {d}");
        }
    }

    #[test]
    fn norm_minus_one_squares() {
        for d in [2i64, 5, 10, 13, 17, 29] {
            let f = TotallyRealField::quadratic(d).unwrap();
            let data = unit_group(&f).unwrap();
            let e = &data.fundamental[0];
            assert_eq!(e.norm(), int(-1), "d = {d}");
            assert_eq!(data.totally_positive[0], e.pow(2));
        }
    }

    #[test]
    fn kernel_over_f2() {
        let cols = vec![vec![1, 1], vec![0, 1]];
        assert!(f2_kernel(&cols, 2).is_empty());
        let cols = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(f2_kernel(&cols, 2), vec![vec![1, 1]]);
    }
}
