use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{self, RatMatrix};
use crate::rational::{ceil, format_rational};

/// `(1/n) log Nm - 1`.
pub fn ss_injectivity_bound(n: usize, norm: f64) -> f64 {
    norm.ln() / n as f64 - 1.0
}

/// The bracketed factor `I - c Z` of the complex Hessian of `-N^t`,
/// `c = t / (1 - t)`, in the basis `(Im z_i) d/dz_i`.
#[derive(Clone, Debug)]
pub struct PshHessian {
    pub t: BigRational,
    pub c: BigRational,
    pub matrix: RatMatrix,
    /// `1 - c (n - 1)` once, `1 + c` with multiplicity `n - 1`.
    pub eigenvalues: Vec<BigRational>,
    pub psd: bool,
    /// `t (1 - t) / 4`, the positive scalar in front (times `N^t`).
    pub prefactor: BigRational,
}

impl PshHessian {
    pub fn zero_eigenvalues(&self) -> usize {
        self.eigenvalues.iter().filter(|e| e.is_zero()).count()
    }

    /// Checks the closed-form spectrum against the matrix itself: every
    /// listed eigenvalue has the stated multiplicity as the nullity of the
    /// shifted matrix, and the LDL test agrees with the sign of the spectrum.
    pub fn cross_check(&self) -> bool {
        let mut distinct: Vec<&BigRational> = Vec::new();
        for e in &self.eigenvalues {
            if !distinct.contains(&e) {
                distinct.push(e);
            }
        }
        let mult_ok = distinct.iter().all(|e| {
            let mult = self.eigenvalues.iter().filter(|x| x == e).count();
            linalg::nullity_shifted(&self.matrix, e) == mult
        });
        mult_ok && linalg::is_psd_symmetric(&self.matrix) == self.psd
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t": format_rational(&self.t),
            "c": format_rational(&self.c),
            "matrix": self.matrix.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "eigenvalues": self.eigenvalues.iter().map(format_rational).collect::<Vec<_>>(),
            "psd": self.psd,
        })
    }
}

pub fn psh_hessian(t: &BigRational, n: usize) -> Result<PshHessian> {
    if !t.is_positive() || t >= &BigRational::one() {
        return Err(Error::InvalidInput(format!("t = {} must lie in (0, 1)", format_rational(t))));
    }
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let one = BigRational::one();
    let c = t / (&one - t);
    let matrix: RatMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one.clone() } else { -c.clone() }).collect())
        .collect();
    let low = &one - &c * BigRational::from_integer(BigInt::from(n - 1));
    let mut eigenvalues = vec![low];
    eigenvalues.extend(std::iter::repeat_n(&one + &c, n - 1));
    eigenvalues.sort();
    let psd = eigenvalues.iter().all(|e| !e.is_negative());
    let prefactor = t * (&one - t) / BigRational::from_integer(BigInt::from(4));
    Ok(PshHessian { t: t.clone(), c, matrix, eigenvalues, psd, prefactor })
}

/// Both sides of `(1/n) vol >= sum_tau (s Nm_*(tau))^{1/n} mult_tau`.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityVerdict {
    pub lhs: f64,
    pub rhs: Interval,
    /// `n` times the right-hand side: the least admissible volume.
    pub volume_needed: Interval,
    pub holds: bool,
}

pub fn boundary_multiplicity_bound(
    volume: f64,
    s: f64,
    strata: &[(BigRational, u64)],
    n: usize,
    tol: f64,
) -> Result<MultiplicityVerdict> {
    if n == 0 || !(s > 0.0) {
        return Err(Error::InvalidInput("need n >= 1 and s > 0".into()));
    }
    let mut rhs = Interval::exact(0.0);
    for (nm, mult) in strata {
        if !nm.is_positive() {
            return Err(Error::InvalidInput("stratum norms must be positive".into()));
        }
        let term = (Interval::exact(s) * Interval::from_rational(nm)).root(n as u32);
        rhs = rhs + term * Interval::exact(*mult as f64);
    }
    let lhs = volume / n as f64;
    let volume_needed = rhs * Interval::exact(n as f64);
    Ok(MultiplicityVerdict { lhs, rhs, volume_needed, holds: lhs >= rhs.lo - tol })
}

/// `(4 pi)^k / k! * sinh^{2k}(r/2) * mult`.
pub fn interior_volume_bound(k: u32, r: f64, mult: u64) -> Interval {
    let factorial = (1..=k).fold(Interval::exact(1.0), |acc, j| acc * Interval::exact(f64::from(j)));
    let four_pi = Interval::pi() * Interval::exact(4.0);
    let sh = (Interval::exact(r) / Interval::exact(2.0)).sinh();
    four_pi.powi(k) / factorial * sh.powi(2 * k) * Interval::exact(mult as f64)
}

/// Least integer genus `g >= 0` with `2g - 2 >= (K.C - (n-1) D.C) / n`.
pub fn schwarz_genus_bound(kc: &BigRational, dc: &BigRational, n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let n_q = BigRational::from_integer(BigInt::from(n));
    let rhs = (kc - dc * (&n_q - BigRational::one())) / n_q;
    let g = ceil(&((rhs + BigRational::from_integer(2.into())) / BigRational::from_integer(2.into())));
    Ok(if g.is_negative() { BigInt::zero() } else { g })
}

/// `(2g - 2) / d!`, the lower bound on the largest diagonal multiplicity.
pub fn gonality_rh_bound(d: u32, g: i64) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let fact: BigInt = (1..=d).map(BigInt::from).product();
    Ok(BigRational::new(BigInt::from(2 * g - 2), fact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use approx::assert_relative_eq;

    #[test]
    fn injectivity() {
        let e = std::f64::consts::E;
        assert_relative_eq!(ss_injectivity_bound(2, e.powi(4)), 1.0, epsilon = 1e-14);
        assert_relative_eq!(ss_injectivity_bound(2, e.powi(2)), 0.0, epsilon = 1e-14);
        assert_relative_eq!(ss_injectivity_bound(3, e.powi(6)), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn hessian_examples() {
        let h = psh_hessian(&rat(1, 2), 2).unwrap();
        assert_eq!(h.matrix, vec![vec![int(1), int(-1)], vec![int(-1), int(1)]]);
        assert_eq!(h.eigenvalues, vec![int(0), int(2)]);
        assert!(h.psd && h.cross_check());
        let h = psh_hessian(&rat(1, 3), 3).unwrap();
        assert_eq!(h.eigenvalues, vec![int(0), rat(3, 2), rat(3, 2)]);
        assert!(h.psd && h.cross_check());
        let h = psh_hessian(&rat(2, 3), 2).unwrap();
        assert_eq!(h.eigenvalues[0], int(-1));
        assert!(!h.psd && h.cross_check());
        assert!(psh_hessian(&int(1), 2).is_err());
    }

    #[test]
    fn hessian_at_critical_exponent() {
        for n in 2..=8usize {
            let h = psh_hessian(&rat(1, n as i64), n).unwrap();
            assert!(h.psd);
            assert_eq!(h.zero_eigenvalues(), 1);
            assert!(h.eigenvalues[1..].iter().all(|e| e == &rat(n as i64, n as i64 - 1)));
            assert!(h.cross_check());
            let past = rat(1, n as i64) + rat(1, 100);
            let h = psh_hessian(&past, n).unwrap();
            assert!(!h.psd && h.cross_check());
        }
    }

    #[test]
    fn multiplicity_examples() {
        let v = boundary_multiplicity_bound(12.0, 4.0, &[(int(1), 3)], 2, 1e-9).unwrap();
        assert!(v.volume_needed.contains(12.0));
        assert!(v.holds);
        assert!(!boundary_multiplicity_bound(11.9, 4.0, &[(int(1), 3)], 2, 1e-9).unwrap().holds);
        let v = boundary_multiplicity_bound(0.0, 4.0, &[], 2, 0.0).unwrap();
        assert!(v.volume_needed.contains(0.0) && v.volume_needed.mag() < 1e-300);
        assert!(v.holds);
        let v = boundary_multiplicity_bound(10.0, 1.0, &[(int(4), 1)], 2, 0.0).unwrap();
        assert!(v.volume_needed.contains(4.0));
    }

    #[test]
    fn interior_examples() {
        let v = interior_volume_bound(1, 2.0, 1);
        assert!(v.contains(4.0 * std::f64::consts::PI * 1f64.sinh().powi(2)));
        assert_relative_eq!(v.mid(), 17.355, epsilon = 1e-3);
        assert_eq!(interior_volume_bound(1, 0.0, 7).mid(), 0.0);
        let v = interior_volume_bound(2, 1.0, 2);
        let expected = 16.0 * std::f64::consts::PI.powi(2) / 2.0 * 0.5f64.sinh().powi(4) * 2.0;
        assert_relative_eq!(v.mid(), expected, max_relative = 1e-12);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(schwarz_genus_bound(&int(3), &int(1), 2).unwrap(), BigInt::from(2));
        assert_eq!(schwarz_genus_bound(&int(9), &int(1), 2).unwrap(), BigInt::from(3));
        assert_eq!(schwarz_genus_bound(&int(-1), &int(1), 2).unwrap(), BigInt::from(1));
        assert_eq!(schwarz_genus_bound(&int(1), &int(1), 2).unwrap(), BigInt::from(1));
        assert_eq!(schwarz_genus_bound(&int(-3), &int(1), 2).unwrap(), BigInt::from(0));
        assert_eq!(schwarz_genus_bound(&int(-30), &int(1), 2).unwrap(), BigInt::from(0));
    }

    #[test]
    fn gonality_examples() {
        assert_eq!(gonality_rh_bound(2, 3).unwrap(), int(2));
        assert_eq!(gonality_rh_bound(1, 5).unwrap(), int(8));
        assert_eq!(gonality_rh_bound(3, 7).unwrap(), int(2));
    }
}
