use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{FieldElement, TotallyRealField};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::rational::lcm_of_denominators;

/// A nonzero fractional ideal, stored as `(1/denom) * rowspan(hnf)` in
/// coordinates over the integral basis.
///
/// `hnf` is the square upper-triangular Hermite normal form with positive
/// diagonal and entries above the diagonal reduced modulo the pivot, and
/// `denom` is the least positive integer clearing all denominators. Two
/// ideals are equal exactly when both parts agree.
#[derive(Clone)]
pub struct FractionalIdeal {
    field: TotallyRealField,
    denom: BigInt,
    hnf: IntMatrix,
}

impl PartialEq for FractionalIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.denom == other.denom && self.hnf == other.hnf
    }
}

impl Eq for FractionalIdeal {}

impl std::hash::Hash for FractionalIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.denom.hash(state);
        self.hnf.hash(state);
    }
}

impl fmt::Debug for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .hnf
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        if self.denom.is_one() {
            write!(f, "<{}>", rows.join(", "))
        } else {
            write!(f, "1/{} <{}>", self.denom, rows.join(", "))
        }
    }
}

impl FractionalIdeal {
    /// Canonical form of the Z-lattice spanned by rational coordinate rows.
    /// Fails with `ZeroIdeal` unless the rows have full rank.
    fn from_lattice_rows(field: &TotallyRealField, rows: &[Vec<BigRational>]) -> Result<Self> {
        let n = field.degree();
        let d0 = lcm_of_denominators(rows.iter().flatten());
        let d0q = BigRational::from_integer(d0.clone());
        let ints: IntMatrix = rows.iter().map(|r| r.iter().map(|x| (x * &d0q).to_integer()).collect()).collect();
        let h = linalg::hnf(&ints);
        if h.len() != n {
            return Err(Error::ZeroIdeal);
        }
        let g = h.iter().flatten().fold(d0.clone(), |acc, x| acc.gcd(x));
        let hnf: IntMatrix = h.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect();
        Ok(FractionalIdeal { field: field.clone(), denom: d0 / g, hnf })
    }

    /// The ideal generated (as an O-module) by the given elements.
    pub fn from_generators(field: &TotallyRealField, gens: &[FieldElement]) -> Result<Self> {
        let n = field.degree();
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in gens {
            if g.is_zero() {
                continue;
            }
            for j in 0..n {
                rows.push((g * &field.basis_element(j)).coords().to_vec());
            }
        }
        if rows.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        Self::from_lattice_rows(field, &rows)
    }

    pub fn principal(x: &FieldElement) -> Result<Self> {
        Self::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn unit(field: &TotallyRealField) -> Self {
        FractionalIdeal { field: field.clone(), denom: BigInt::one(), hnf: linalg::identity_int(field.degree()) }
    }

    /// `(k)` for a nonzero integer.
    pub fn from_int(field: &TotallyRealField, k: i64) -> Result<Self> {
        Self::principal(&field.from_int(k))
    }

    /// Ideal given by an explicit Z-basis; the lattice must be closed under
    /// multiplication by the ring of integers.
    pub fn from_basis(field: &TotallyRealField, rows: &[Vec<BigRational>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != field.degree()) {
            return Err(Error::InvalidInput("ideal basis rows have the wrong length".into()));
        }
        let lat = Self::from_lattice_rows(field, rows)?;
        for b in lat.basis() {
            for j in 0..field.degree() {
                if !lat.contains(&(&b * &field.basis_element(j))) {
                    return Err(Error::InvalidInput("lattice is not an ideal".into()));
                }
            }
        }
        Ok(lat)
    }

    pub fn field(&self) -> &TotallyRealField {
        &self.field
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// Z-basis as rational coordinate rows.
    pub fn basis_rows(&self) -> Vec<Vec<BigRational>> {
        self.hnf
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.denom.clone())).collect())
            .collect()
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.basis_rows()
            .into_iter()
            .map(|r| self.field.element(r).expect("basis row length"))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// Index-style norm `[O : I]`, extended multiplicatively.
    pub fn norm(&self) -> BigRational {
        let det: BigInt = self.hnf.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        BigRational::new(det, self.denom.pow(self.field.degree() as u32))
    }

    /// Integer coordinates of `x` over the HNF basis, if `x` lies in the ideal.
    pub fn coordinates(&self, x: &FieldElement) -> Option<Vec<BigInt>> {
        let n = self.field.degree();
        let dq = BigRational::from_integer(self.denom.clone());
        let mut v: Vec<BigRational> = x.coords().iter().map(|c| c * &dq).collect();
        if v.iter().any(|c| !c.is_integer()) {
            return None;
        }
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            let piv = BigRational::from_integer(self.hnf[i][i].clone());
            let q = &v[i] / &piv;
            if !q.is_integer() {
                return None;
            }
            for j in i..n {
                v[j] -= &q * BigRational::from_integer(self.hnf[i][j].clone());
            }
            out[i] = q.to_integer();
        }
        Some(out)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coordinates(x).is_some()
    }

    /// `I ⊆ J`.
    pub fn is_subset_of(&self, other: &FractionalIdeal) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &FractionalIdeal) -> FractionalIdeal {
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Self::from_lattice_rows(&self.field, &rows).expect("sum of nonzero ideals")
    }

    pub fn product(&self, other: &FractionalIdeal) -> FractionalIdeal {
        let a = self.basis();
        let b = other.basis();
        let rows: Vec<Vec<BigRational>> =
            a.iter().flat_map(|x| b.iter().map(move |y| (x * y).coords().to_vec())).collect();
        Self::from_lattice_rows(&self.field, &rows).expect("product of nonzero ideals")
    }

    pub fn scale(&self, x: &FieldElement) -> Result<FractionalIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let rows: Vec<Vec<BigRational>> = self.basis().iter().map(|b| (b * x).coords().to_vec()).collect();
        Self::from_lattice_rows(&self.field, &rows)
    }

    /// Intersection via the integer left kernel of the stacked bases.
    pub fn intersect(&self, other: &FractionalIdeal) -> FractionalIdeal {
        let d = self.denom.lcm(&other.denom);
        let a: IntMatrix = self.hnf.iter().map(|r| r.iter().map(|x| x * (&d / &self.denom)).collect()).collect();
        let b: IntMatrix = other.hnf.iter().map(|r| r.iter().map(|x| x * (&d / &other.denom)).collect()).collect();
        let n = self.field.degree();
        let mut stacked = a.clone();
        stacked.extend(b);
        let kernel = linalg::left_kernel(&stacked);
        let dq = BigRational::from_integer(d);
        let rows: Vec<Vec<BigRational>> = kernel
            .iter()
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let s: BigInt = (0..n).map(|i| &k[i] * &a[i][j]).sum();
                        BigRational::from_integer(s) / &dq
                    })
                    .collect()
            })
            .collect();
        Self::from_lattice_rows(&self.field, &rows).expect("intersection of nonzero ideals")
    }

    /// `{x : x I ⊆ O}`, computed as the dual lattice of the products of the
    /// ideal basis with the multiplication matrices, then verified.
    pub fn inverse(&self) -> Result<FractionalIdeal> {
        let n = self.field.degree();
        // x b_k in O for every basis element b_k: rows of each L_{b_k} act on x.
        let mut constraint_rows: Vec<Vec<BigRational>> = Vec::with_capacity(n * n);
        for b in self.basis() {
            constraint_rows.extend(self.field.mult_matrix(&b));
        }
        let span = Self::from_lattice_rows(&self.field, &constraint_rows)?;
        // {x : B x in Z^n} has basis the columns of B^{-1}.
        let inv = linalg::inverse(&span.basis_rows()).ok_or(Error::ZeroIdeal)?;
        let rows = linalg::transpose(&inv);
        let result = Self::from_lattice_rows(&self.field, &rows)?;
        if self.product(&result) != Self::unit(&self.field) {
            return Err(Error::NotInvertible);
        }
        Ok(result)
    }

    /// `I^k` for any integer `k`.
    pub fn pow(&self, k: i32) -> Result<FractionalIdeal> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::unit(&self.field);
        for _ in 0..k.unsigned_abs() {
            acc = acc.product(&base);
        }
        Ok(acc)
    }

    /// Quotient `I J^{-1}`.
    pub fn divide(&self, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        Ok(self.product(&other.inverse()?))
    }

    /// Canonical HNF rows as strings, for reports.
    pub fn to_strings(&self) -> (String, Vec<Vec<String>>) {
        (
            self.denom.to_string(),
            self.hnf.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        )
    }

    /// Least positive rational `q` with `q` in the ideal, so that `I ∩ Q = qZ`.
    pub fn min_integer(&self) -> BigRational {
        // q = k / denom with k dividing the product of the pivots.
        let bound: BigInt = self.hnf.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        let mut k = BigInt::one();
        while k <= bound {
            let q = BigRational::new(k.clone(), self.denom.clone());
            if self.contains(&self.field.from_rational(&q)) {
                return q;
            }
            k += 1;
        }
        unreachable!("the pivot product lies in every integral lattice ideal")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn q5() -> TotallyRealField {
        TotallyRealField::quadratic(5).unwrap()
    }

    #[test]
    fn basic_identities() {
        for d in [2, 3, 5] {
            let f = TotallyRealField::quadratic(d).unwrap();
            let two = FractionalIdeal::from_int(&f, 2).unwrap();
            let three = FractionalIdeal::from_int(&f, 3).unwrap();
            let six = FractionalIdeal::from_int(&f, 6).unwrap();
            assert_eq!(two.intersect(&three), six);
            let s = two.sum(&three);
            assert_eq!(s.product(&s), FractionalIdeal::unit(&f));
            assert_eq!(two.norm(), int(4));
            assert_eq!(FractionalIdeal::unit(&f).norm(), int(1));
        }
    }

    #[test]
    fn sqrt5_inverse() {
        let f = q5();
        let s5 = f.element(vec![int(-1), int(2)]).unwrap(); // 2w - 1 = sqrt5
        let i = FractionalIdeal::principal(&s5).unwrap();
        assert_eq!(i.norm(), int(5));
        let inv = i.inverse().unwrap();
        assert_eq!(inv.product(&i), FractionalIdeal::unit(&f));
        assert_eq!(inv.norm(), crate::rational::rat(1, 5));
        assert!(!inv.is_integral());
    }

    #[test]
    fn membership_and_from_basis() {
        let f = q5();
        let two = FractionalIdeal::from_int(&f, 2).unwrap();
        assert!(two.contains(&f.from_int(4)));
        assert!(!two.contains(&f.from_int(3)));
        let rows = vec![vec![int(2), int(0)], vec![int(0), int(1)]];
        assert!(FractionalIdeal::from_basis(&f, &rows).is_err());
        let j = FractionalIdeal::from_basis(&f, &two.basis_rows()).unwrap();
        assert_eq!(j, two);
        assert_eq!(two.min_integer(), int(2));
    }

    #[test]
    fn zero_ideal_rejected() {
        let f = q5();
        assert_eq!(FractionalIdeal::principal(&f.zero()).unwrap_err(), Error::ZeroIdeal);
    }
}
