//! Dense univariate polynomials over Q, Sturm sequences and real root isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{int, RatInterval};

/// Coefficients from the constant term upwards; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RatInterval::point(c.clone()));
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division: `(q, r)` with `self = q * d + r`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        let lead = d.lead();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.lead();
        Poly::new(a.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let v = self.eval(x);
        v.cmp(&BigRational::zero())
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...`.
pub struct SturmSequence {
    chain: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Poly::new(r.coeffs().iter().map(|c| -c).collect()));
        }
        SturmSequence { chain }
    }

    fn sign_changes<F: Fn(&Poly) -> Ordering>(&self, sign: F) -> usize {
        let signs: Vec<Ordering> = self
            .chain
            .iter()
            .map(sign)
            .filter(|s| *s != Ordering::Equal)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn changes_at(&self, x: &BigRational) -> usize {
        self.sign_changes(|p| p.sign_at(x))
    }

    fn changes_at_pos_inf(&self) -> usize {
        self.sign_changes(|p| p.lead().cmp(&BigRational::zero()))
    }

    fn changes_at_neg_inf(&self) -> usize {
        self.sign_changes(|p| {
            let s = p.lead().cmp(&BigRational::zero());
            if p.degree().unwrap_or(0) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        })
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_real_roots(&self) -> usize {
        self.changes_at_neg_inf() - self.changes_at_pos_inf()
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.changes_at(a) - self.changes_at(b)
    }
}

/// Cauchy bound: every root has absolute value below the returned rational.
pub fn cauchy_bound(p: &Poly) -> BigRational {
    let lead = p.lead().abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// Isolates every real root of a squarefree polynomial with rational roots
/// excluded at interval endpoints. Intervals are returned in descending order.
pub fn isolate_real_roots(p: &Poly) -> Vec<RatInterval> {
    let sturm = SturmSequence::new(p);
    let b = cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let k = sturm.count_in(&lo, &hi);
        if k == 0 {
            continue;
        }
        if k == 1 && !p.eval(&hi).is_zero() && !p.eval(&lo).is_zero() {
            out.push(RatInterval::new(lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / int(2);
        if p.eval(&mid).is_zero() {
            // Rational root: record it exactly and split around it.
            out.push(RatInterval::point(mid.clone()));
            let eps = (&hi - &lo) / int(1 << 20);
            stack.push((lo, &mid - &eps));
            stack.push((mid + eps, hi));
            continue;
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| b.lo.cmp(&a.lo));
    out
}

/// Bisects an isolating interval until its width is at most `width`.
pub fn refine_root(p: &Poly, root: &RatInterval, width: &BigRational) -> RatInterval {
    let mut lo = root.lo.clone();
    let mut hi = root.hi.clone();
    if lo == hi {
        return root.clone();
    }
    let mut s_lo = p.sign_at(&lo);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / int(2);
        let s = p.sign_at(&mid);
        if s == Ordering::Equal {
            return RatInterval::point(mid);
        }
        if s == s_lo {
            lo = mid;
            s_lo = s;
        } else {
            hi = mid;
        }
    }
    RatInterval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(SturmSequence::new(&p(&[-5, 0, 1])).count_real_roots(), 2);
        assert_eq!(SturmSequence::new(&p(&[1, 0, 1])).count_real_roots(), 0);
        assert_eq!(SturmSequence::new(&p(&[1, -3, 0, 1])).count_real_roots(), 3);
        assert_eq!(SturmSequence::new(&p(&[-1, 0, 0, 1])).count_real_roots(), 1);
    }

    #[test]
    fn isolates_and_refines_sqrt5() {
        let f = p(&[-5, 0, 1]);
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        let r = refine_root(&f, &roots[0], &rat(1, 1 << 30));
        let mid: f64 = num_traits::ToPrimitive::to_f64(&r.midpoint()).unwrap();
        assert!((mid - 5f64.sqrt()).abs() < 1e-8);
        assert!(roots[1].hi <= BigRational::zero());
    }

    #[test]
    fn rational_roots_are_points() {
        let f = p(&[0, -1, 0, 1]); // x^3 - x
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|r| r.lo == BigRational::zero() && r.hi == BigRational::zero()));
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = p(&[1, -2, 1]); // (x-1)^2
        assert!(!f.is_squarefree());
        assert!(p(&[-2, 0, 1]).is_squarefree());
        let g = p(&[-1, 0, 1]).gcd(&p(&[1, 1]));
        assert_eq!(g, p(&[1, 1]));
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, 0, -2, 5, 1]);
        let d = p(&[1, 2]);
        let (q, r) = a.div_rem(&d);
        let back = q.mul(&d);
        let sum: Vec<BigRational> = (0..a.coeffs().len())
            .map(|i| {
                back.coeffs().get(i).cloned().unwrap_or_default()
                    + r.coeffs().get(i).cloned().unwrap_or_default()
            })
            .collect();
        assert_eq!(Poly::new(sum), a);
    }
}
