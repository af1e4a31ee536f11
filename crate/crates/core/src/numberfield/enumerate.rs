//! Certified enumeration of lattice points of a full-rank sublattice of a
//! field inside a box `|sigma_i(x)| <= B_i`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::field::{FieldElement, TotallyRealField};
use crate::error::{Error, Result};
use crate::interval::{rational_to_f64_bounds, Interval};

/// Default cap on the number of candidate coefficient vectors.
pub const DEFAULT_BOX_CAP: u128 = 20_000_000;

/// LLL-reduces a lattice basis with respect to the embedding norm weighted
/// by `1 / scale_i`. Returns a new basis of the same lattice.
pub fn reduce_basis(field: &TotallyRealField, basis: &[FieldElement], scale: &[f64]) -> Vec<FieldElement> {
    let n = basis.len();
    let mut vecs: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| b.to_f64().iter().zip(scale).map(|(x, s)| x / s).collect())
        .collect();
    if vecs.iter().flatten().any(|x| !x.is_finite()) {
        return basis.to_vec();
    }
    let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    lll(&mut vecs, &mut t);
    t.iter()
        .map(|row| {
            row.iter().zip(basis).fold(field.zero(), |acc, (&c, b)| {
                if c == 0 {
                    acc
                } else {
                    acc + b.scale(&BigRational::from_integer(BigInt::from(c)))
                }
            })
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Floating-point LLL with delta = 0.99 tracking an integer transform.
/// Stops early if the transform would overflow; the result is always a
/// unimodular change of basis.
fn lll(v: &mut [Vec<f64>], t: &mut [Vec<i64>]) {
    let n = v.len();
    if n < 2 {
        return;
    }
    let delta = 0.99;
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 10_000 * n * n {
        steps += 1;
        for j in (0..k).rev() {
            let q = gram_schmidt(v).0[k][j].round();
            if q == 0.0 {
                continue;
            }
            if q.abs() > 1e15 {
                return;
            }
            let qi = q as i64;
            let mut new_row = t[k].clone();
            for (a, b) in new_row.iter_mut().zip(&t[j]) {
                match b.checked_mul(qi).and_then(|p| a.checked_sub(p)) {
                    Some(x) => *a = x,
                    None => return,
                }
            }
            t[k] = new_row;
            let vj = v[j].clone();
            for (a, b) in v[k].iter_mut().zip(&vj) {
                *a -= q * b;
            }
        }
        let (mu, bstar) = gram_schmidt(v);
        let nk = dot(&bstar[k], &bstar[k]);
        let nk1 = dot(&bstar[k - 1], &bstar[k - 1]);
        if nk >= (delta - mu[k][k - 1] * mu[k][k - 1]) * nk1 {
            k += 1;
        } else {
            v.swap(k, k - 1);
            t.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

fn gram_schmidt(v: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = v.len();
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut b = v[i].clone();
        for j in 0..i {
            let denom = dot(&bstar[j], &bstar[j]);
            mu[i][j] = if denom > 0.0 { dot(&v[i], &bstar[j]) / denom } else { 0.0 };
            for (x, y) in b.iter_mut().zip(&bstar[j]) {
                *x -= mu[i][j] * y;
            }
        }
        bstar.push(b);
    }
    (mu, bstar)
}

fn invert_f64(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[p][c] == 0.0 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(p, c);
        let piv = a[c][c];
        for x in a[c].iter_mut() {
            *x /= piv;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                if f != 0.0 {
                    let rc = a[c].clone();
                    for (x, y) in a[i].iter_mut().zip(&rc) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Certified integer bounds on the coefficients of every lattice vector in
/// the box, together with the enclosures of the basis embeddings.
fn coefficient_bounds(
    field: &TotallyRealField,
    basis: &[FieldElement],
    bounds_hi: &[f64],
    cap: u128,
) -> Result<(Vec<i64>, Vec<Vec<Interval>>)> {
    let n = field.degree();
    // e[i][j] encloses sigma_i(b_j).
    let cols: Vec<Vec<Interval>> = basis.iter().map(|b| field.embed_interval(b)).collect();
    let e: Vec<Vec<Interval>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    let mid: Vec<Vec<f64>> = e.iter().map(|r| r.iter().map(|x| x.mid()).collect()).collect();
    let approx =
        invert_f64(&mid).ok_or_else(|| Error::Precondition("lattice basis is numerically singular".into()))?;
    let mut delta = Interval::exact(0.0);
    for j in 0..n {
        let mut row_sum = Interval::exact(0.0);
        for k in 0..n {
            let mut r = Interval::exact(if j == k { 1.0 } else { 0.0 });
            for i in 0..n {
                r = r - Interval::exact(approx[j][i]) * e[i][k];
            }
            row_sum = row_sum + Interval::exact(r.mag());
        }
        if row_sum.hi > delta.hi {
            delta = row_sum;
        }
    }
    if delta.hi >= 0.5 {
        return Err(Error::Precondition("lattice basis is too ill-conditioned to enumerate".into()));
    }
    let c: Vec<Interval> = (0..n)
        .map(|j| {
            (0..n).fold(Interval::exact(0.0), |acc, i| {
                acc + Interval::exact(approx[j][i].abs()) * Interval::exact(bounds_hi[i])
            })
        })
        .collect();
    let m = c.iter().fold(0.0f64, |acc, x| acc.max(x.hi));
    let slack = Interval::exact(delta.hi) * Interval::exact(m) / (Interval::exact(1.0) - Interval::exact(delta.hi));
    let mut out = Vec::with_capacity(n);
    for cj in c {
        let b = (cj + slack).hi.floor();
        if !b.is_finite() || b > 1e15 {
            return Err(Error::BoxTooLarge { points: u128::MAX, cap });
        }
        out.push(b as i64);
    }
    Ok((out, e))
}

/// Every `x` in the Z-span of `basis` with `|sigma_i(x)| <= bounds[i]`,
/// decided exactly, sorted by coordinates. Includes zero.
pub fn enumerate_box(
    field: &TotallyRealField,
    basis: &[FieldElement],
    bounds: &[BigRational],
    cap: u128,
) -> Result<Vec<FieldElement>> {
    let n = field.degree();
    if basis.len() != n || bounds.len() != n {
        return Err(Error::InvalidInput("box enumeration needs a full-rank basis and one bound per embedding".into()));
    }
    if bounds.iter().any(|b| b.is_negative()) {
        return Ok(Vec::new());
    }
    if bounds.iter().any(|b| b.is_zero()) {
        return Ok(vec![field.zero()]);
    }
    let f_bounds: Vec<(f64, f64)> = bounds.iter().map(rational_to_f64_bounds).collect();
    let hi: Vec<f64> = f_bounds.iter().map(|b| b.1).collect();
    let reduced = reduce_basis(field, basis, &hi);
    let (coef, e) = coefficient_bounds(field, &reduced, &hi, cap)?;
    let mut total: u128 = 1;
    for &c in &coef {
        total = total.saturating_mul(2 * c as u128 + 1);
    }
    if total > cap {
        return Err(Error::BoxTooLarge { points: total, cap });
    }
    let first = coef[0];
    let mut points: Vec<FieldElement> = (-first..=first)
        .into_par_iter()
        .flat_map_iter(|c0| {
            let mut found = Vec::new();
            let mut c = vec![0i64; n];
            c[0] = c0;
            for k in 1..n {
                c[k] = -coef[k];
            }
            loop {
                if let Some(x) = check_point(field, &reduced, &e, &c, bounds, &f_bounds) {
                    found.push(x);
                }
                // Advance the odometer over coordinates 1..n.
                let mut k = n - 1;
                loop {
                    if k == 0 {
                        return found;
                    }
                    if c[k] < coef[k] {
                        c[k] += 1;
                        break;
                    }
                    c[k] = -coef[k];
                    k -= 1;
                }
            }
        })
        .collect();
    points.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(points)
}

fn check_point(
    field: &TotallyRealField,
    basis: &[FieldElement],
    e: &[Vec<Interval>],
    c: &[i64],
    bounds: &[BigRational],
    f_bounds: &[(f64, f64)],
) -> Option<FieldElement> {
    let n = c.len();
    let mut undecided = false;
    for i in 0..n {
        let s = (0..n).fold(Interval::exact(0.0), |acc, j| acc + Interval::exact(c[j] as f64) * e[i][j]);
        if s.mig() > f_bounds[i].1 {
            return None;
        }
        if s.mag() > f_bounds[i].0 {
            undecided = true;
        }
    }
    let x = c.iter().zip(basis).fold(field.zero(), |acc, (&k, b)| {
        if k == 0 {
            acc
        } else {
            acc + b.scale(&BigRational::from_integer(BigInt::from(k)))
        }
    });
    if undecided {
        for (i, b) in bounds.iter().enumerate() {
            if field.cmp_at_rational(&x, b, i) == Ordering::Greater
                || field.cmp_at_rational(&x, &-b, i) == Ordering::Less
            {
                return None;
            }
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::FractionalIdeal;
    use crate::rational::{int, rat};

    /// Oracle: scan a generous coordinate range over the integral basis.
    fn brute(field: &TotallyRealField, bound: f64, range: i64) -> Vec<FieldElement> {
        let mut out = Vec::new();
        for a in -range..=range {
            for b in -range..=range {
                let x = field.element_from_ints(&[a, b]);
                if x.to_f64().iter().all(|v| v.abs() <= bound) {
                    out.push(x);
                }
            }
        }
        out.sort_by(|a, b| a.coords().cmp(b.coords()));
        out
    }

    #[test]
    fn matches_brute_force_in_quadratic_fields() {
        for d in [2, 3, 5, 13] {
            let f = TotallyRealField::quadratic(d).unwrap();
            let basis = FractionalIdeal::unit(&f).basis();
            for bound in [rat(1, 2), int(1), rat(101, 100), int(3), rat(15, 2)] {
                let got = enumerate_box(&f, &basis, &[bound.clone(), bound.clone()], DEFAULT_BOX_CAP).unwrap();
                let b = num_traits::ToPrimitive::to_f64(&bound).unwrap();
                assert_eq!(got, brute(&f, b + 1e-9, 40), "d = {d}, bound = {bound}");
            }
        }
    }

    #[test]
    fn boundary_points_are_exact() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let basis = FractionalIdeal::unit(&f).basis();
        let got = enumerate_box(&f, &basis, &[int(1), int(1)], DEFAULT_BOX_CAP).unwrap();
        assert_eq!(got.len(), 3); // 0, 1, -1
    }

    #[test]
    fn cap_is_enforced() {
        let f = TotallyRealField::quadratic(2).unwrap();
        let basis = FractionalIdeal::unit(&f).basis();
        let r = enumerate_box(&f, &basis, &[int(1000), int(1000)], 100);
        assert!(matches!(r, Err(Error::BoxTooLarge { .. })));
    }

    #[test]
    fn skewed_basis_is_reduced() {
        let f = TotallyRealField::quadratic(2).unwrap();
        // Basis of O related to {1, sqrt2} by a large unimodular matrix.
        let a = f.element_from_ints(&[1001, 1000]);
        let b = f.element_from_ints(&[1000, 999]);
        let got = enumerate_box(&f, &[a, b], &[int(2), int(2)], DEFAULT_BOX_CAP).unwrap();
        assert_eq!(got, brute(&f, 2.0 + 1e-9, 10));
    }
}
