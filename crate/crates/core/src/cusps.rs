//! Cusps as points of `P^1(F)`, their unipotent stabilizers, and lower bounds
//! for canonical depths.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::congruence::{Flavor, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numberfield::{
    element_from_spec, element_to_spec, ideal_min_with_witness, ElementSpec, FieldElement, FractionalIdeal,
    TotallyRealField,
};
use crate::rational::format_rational;

/// A point `(alpha : beta)` of `P^1(F)`.
///
/// The stored representative is canonical: `(1 : 0)` for infinity, and
/// otherwise `(m x : m)` with `x = alpha / beta` and `m` the least positive
/// integer making `m x` integral.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cusp {
    alpha: FieldElement,
    beta: FieldElement,
}

impl fmt::Debug for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.alpha, self.beta)
    }
}

impl Cusp {
    pub fn new(alpha: FieldElement, beta: FieldElement) -> Result<Self> {
        let field = alpha.field().clone();
        if alpha.is_zero() && beta.is_zero() {
            return Err(Error::InvalidInput("(0 : 0) is not a point of P^1".into()));
        }
        if beta.is_zero() {
            return Ok(Cusp { alpha: field.one(), beta: field.zero() });
        }
        let x = &alpha * &beta.inverse().expect("nonzero");
        let m = BigRational::from_integer(x.denominator());
        Ok(Cusp { alpha: x.scale(&m), beta: field.from_rational(&m) })
    }

    pub fn infinity(field: &TotallyRealField) -> Self {
        Cusp { alpha: field.one(), beta: field.zero() }
    }

    /// The cusp `x = x : 1`.
    pub fn from_element(x: &FieldElement) -> Self {
        Cusp::new(x.clone(), x.field().one()).expect("beta is nonzero")
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn is_infinity(&self) -> bool {
        self.beta.is_zero()
    }

    /// `alpha a + (beta)`; its class is an invariant of the cusp under `Γ(1)`.
    pub fn ideal(&self, module_ideal: &FractionalIdeal) -> FractionalIdeal {
        let field = module_ideal.field();
        let mut gens: Vec<FieldElement> = module_ideal.basis().iter().map(|b| b * &self.alpha).collect();
        gens.push(self.beta.clone());
        FractionalIdeal::from_generators(field, &gens).expect("cusp coordinates are not both zero")
    }

    pub fn to_spec(&self) -> CuspSpec {
        CuspSpec { alpha: element_to_spec(&self.alpha), beta: element_to_spec(&self.beta) }
    }
}

/// `{"alpha": [..], "beta": [..]}` in integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspSpec {
    pub alpha: ElementSpec,
    pub beta: ElementSpec,
}

impl CuspSpec {
    pub fn build(&self, field: &TotallyRealField) -> Result<Cusp> {
        Cusp::new(element_from_spec(field, &self.alpha)?, element_from_spec(field, &self.beta)?)
    }
}

/// `Δ = alpha delta - beta gamma` for `ξ1 = (alpha : beta)`, `ξ2 = (gamma : delta)`.
pub fn cusp_determinant(first: &Cusp, second: &Cusp) -> Result<FieldElement> {
    let det = &(&first.alpha * &second.beta) - &(&first.beta * &second.alpha);
    if det.is_zero() {
        return Err(Error::EqualCusps);
    }
    Ok(det)
}

/// `Δ a (b^{-2} ∩ c^{-2} n)`, dropping the second factor when `c = 0`.
fn stabilizer_ideal(
    det: &FieldElement,
    module_ideal: &FractionalIdeal,
    cusp_ideal: &FractionalIdeal,
    coordinate: &FieldElement,
    level: &FractionalIdeal,
) -> Result<FractionalIdeal> {
    let mut inner = cusp_ideal.pow(-2)?;
    if !coordinate.is_zero() {
        let c2 = FractionalIdeal::principal(&(coordinate * coordinate))?;
        inner = inner.intersect(&c2.inverse()?.product(level));
    }
    module_ideal.product(&inner).scale(det)
}

/// Translation lattices of the stabilizers of `ξ1` at infinity and of `ξ2` at
/// zero, after moving the pair to `(∞, 0)` by `M = [[alpha, gamma], [beta, delta]]`.
///
/// The level used is that of `Γ0(n)`; the full group uses `n = O`.
pub fn unipotent_stabilizers(
    first: &Cusp,
    second: &Cusp,
    group: &GroupSpec,
) -> Result<(FractionalIdeal, FractionalIdeal)> {
    let det = cusp_determinant(first, second)?;
    let a = group.module_ideal();
    let level = group.effective_level();
    let l1 = stabilizer_ideal(&det, a, &first.ideal(a), &first.beta, &level)?;
    let l2 = stabilizer_ideal(&det, a, &second.ideal(a), &second.beta, &level)?;
    Ok((l1, l2))
}

/// `M g M^{-1}` for `M = [[alpha, gamma], [beta, delta]]`.
pub fn conjugate_back(first: &Cusp, second: &Cusp, g: &GroupElement) -> Result<GroupElement> {
    let det = cusp_determinant(first, second)?;
    let inv_det = det.inverse().expect("nonzero");
    let m = GroupElement::new(first.alpha.clone(), second.alpha.clone(), first.beta.clone(), second.beta.clone());
    let m_inv = GroupElement::new(
        &second.beta * &inv_det,
        -(&second.alpha * &inv_det),
        -(&first.beta * &inv_det),
        &first.alpha * &inv_det,
    );
    Ok(m.mul(g).mul(&m_inv))
}

/// Outcome of the pairwise depth estimate for two cusps.
#[derive(Clone, Debug)]
pub struct DepthReport {
    pub lattice_at_first: FractionalIdeal,
    pub lattice_at_second: FractionalIdeal,
    pub min_first: BigRational,
    pub min_second: BigRational,
    pub witness_first: FieldElement,
    pub witness_second: FieldElement,
    /// `ideal_min(Λ1) * ideal_min(Λ2)`.
    pub product: BigRational,
    pub level_norm: BigRational,
    /// `(b1^2 + beta^2 n^{-1})(b2^2 + delta^2 n^{-1}) ⊇ Δ^2 a^2 n^{-1}`.
    pub containment_holds: bool,
}

impl DepthReport {
    pub fn bound_holds(&self) -> bool {
        self.product >= self.level_norm
    }

    pub fn holds(&self) -> bool {
        self.containment_holds && self.bound_holds()
    }

    /// `P / |Nm n| - 1`, non-negative when the bound holds.
    pub fn margin(&self) -> f64 {
        (&self.product / &self.level_norm - BigRational::one()).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> DepthJson {
        DepthJson {
            lattice_at_first: self.lattice_at_first.basis().iter().map(element_to_spec).collect(),
            lattice_at_second: self.lattice_at_second.basis().iter().map(element_to_spec).collect(),
            min_first: format_rational(&self.min_first),
            min_second: format_rational(&self.min_second),
            product: format_rational(&self.product),
            level_norm: format_rational(&self.level_norm),
            sqrt_level_norm: self.level_norm.to_f64().unwrap_or(f64::NAN).sqrt(),
            containment_holds: self.containment_holds,
            bound_holds: self.bound_holds(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthJson {
    pub lattice_at_first: Vec<ElementSpec>,
    pub lattice_at_second: Vec<ElementSpec>,
    pub min_first: String,
    pub min_second: String,
    pub product: String,
    pub level_norm: String,
    pub sqrt_level_norm: f64,
    pub containment_holds: bool,
    pub bound_holds: bool,
}

fn factor_with_level(
    cusp_ideal: &FractionalIdeal,
    coordinate: &FieldElement,
    level_inverse: &FractionalIdeal,
) -> Result<FractionalIdeal> {
    let sq = cusp_ideal.product(cusp_ideal);
    if coordinate.is_zero() {
        return Ok(sq);
    }
    let c2 = FractionalIdeal::principal(&(coordinate * coordinate))?;
    Ok(sq.sum(&c2.product(level_inverse)))
}

/// Pairwise depth estimate: `P = |Λ1| |Λ2|` together with the exact ideal
/// containment that forces `P >= |Nm n|`.
pub fn depth_product_bound(first: &Cusp, second: &Cusp, group: &GroupSpec) -> Result<DepthReport> {
    let (l1, l2) = unipotent_stabilizers(first, second, group)?;
    let (min_first, witness_first) = ideal_min_with_witness(&l1)?;
    let (min_second, witness_second) = ideal_min_with_witness(&l2)?;
    let level = group.effective_level();
    let level_inv = level.inverse()?;
    let a = group.module_ideal();
    let det = cusp_determinant(first, second)?;
    let lhs = factor_with_level(&first.ideal(a), &first.beta, &level_inv)?
        .product(&factor_with_level(&second.ideal(a), &second.beta, &level_inv)?);
    let rhs = a.product(a).product(&level_inv).scale(&(&det * &det))?;
    Ok(DepthReport {
        product: &min_first * &min_second,
        lattice_at_first: l1,
        lattice_at_second: l2,
        min_first,
        min_second,
        witness_first,
        witness_second,
        level_norm: level.norm(),
        containment_holds: rhs.is_subset_of(&lhs),
    })
}

/// Which cover the depth bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverVariant {
    /// `X0(n)` and `X1(n)`: depth at least `|Nm n|^{1/2}`.
    Torsion,
    /// The principal cover `X(n)`: depth at least `|Nm n|`.
    Principal,
}

impl std::str::FromStr for CoverVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torsion" => Ok(CoverVariant::Torsion),
            "principal" => Ok(CoverVariant::Principal),
            other => Err(Error::InvalidInput(format!("unknown cover variant {other:?}"))),
        }
    }
}

/// A depth value: exact when rational, always with a certified enclosure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthValue {
    pub exact: Option<String>,
    pub value: f64,
    pub enclosure: Interval,
}

impl DepthValue {
    fn rational(q: &BigRational) -> Self {
        DepthValue { exact: Some(format_rational(q)), value: q.to_f64().unwrap_or(f64::NAN), enclosure: Interval::from_rational(q) }
    }

    fn sqrt(q: &BigRational) -> Self {
        if let Some(r) = rational_sqrt(q) {
            return Self::rational(&r);
        }
        let enclosure = Interval::from_rational(q).sqrt();
        DepthValue { exact: None, value: enclosure.mid(), enclosure }
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Lower bound for the canonical depth of every cusp of a `Γ0(n)` or `Γ1(n)` quotient.
pub fn canonical_depth_bound(group: &GroupSpec, variant: CoverVariant) -> Result<DepthValue> {
    if group.flavor() == Flavor::Full {
        return Err(Error::WrongFlavor { expected: "gamma0 or gamma1", found: "full" });
    }
    Ok(depth_bound_from_norm(&group.level().norm(), variant))
}

pub fn depth_bound_from_norm(level_norm: &BigRational, variant: CoverVariant) -> DepthValue {
    match variant {
        CoverVariant::Torsion => DepthValue::sqrt(&level_norm.abs()),
        CoverVariant::Principal => DepthValue::rational(&level_norm.abs()),
    }
}

/// Largest residue count for which primality is decided by exhaustion.
const PRIME_CHECK_LIMIT: u64 = 200_000;

/// Decides whether an integral ideal is prime. Returns `None` when the
/// residue ring is too large to check and the necessary conditions pass.
pub fn is_prime_ideal(p: &FractionalIdeal) -> Option<bool> {
    if !p.is_integral() {
        return Some(false);
    }
    let norm = p.norm().to_integer();
    if norm.is_one() {
        return Some(false);
    }
    let q = p.min_integer().to_integer();
    if !is_rational_prime(&q) {
        return Some(false);
    }
    // Nm p must be a power of q.
    let mut rest = norm.clone();
    while (&rest % &q).is_zero() {
        rest /= &q;
    }
    if !rest.is_one() {
        return Some(false);
    }
    if norm == q {
        return Some(true);
    }
    let count = norm.to_u64().filter(|&c| c <= PRIME_CHECK_LIMIT)?;
    let q = q.to_u64().expect("small prime");
    Some(residue_ring_is_domain(p, q, count))
}

fn is_rational_prime(q: &BigInt) -> bool {
    if q < &BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *q {
        if (q % &d).is_zero() {
            return false;
        }
        d += 1;
    }
    true
}

/// `O/p` is a domain iff multiplication by every nonzero residue is injective,
/// i.e. `p/qO` together with `a O` spans `O/qO`.
fn residue_ring_is_domain(p: &FractionalIdeal, q: u64, count: u64) -> bool {
    let field = p.field();
    let n = field.degree();
    let hnf = p.hnf();
    let reduce = |x: &BigInt| x.mod_floor(&BigInt::from(q)).to_u64().expect("residue");
    let ideal_rows: Vec<Vec<u64>> = hnf.iter().map(|r| r.iter().map(reduce).collect()).collect();
    let diag: Vec<u64> = (0..n).map(|i| hnf[i][i].to_u64().expect("small pivot")).collect();
    let mut digits = vec![0u64; n];
    for _ in 1..count {
        // Next residue representative in mixed radix over the HNF pivots.
        for i in (0..n).rev() {
            digits[i] += 1;
            if digits[i] < diag[i] {
                break;
            }
            digits[i] = 0;
        }
        let a = field.element_from_bigints(&digits.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>());
        let mut rows = ideal_rows.clone();
        for j in 0..n {
            let prod = &a * &field.basis_element(j);
            rows.push(prod.coords().iter().map(|c| reduce(&c.to_integer())).collect());
        }
        if rank_mod(&mut rows, q) < n {
            return false;
        }
    }
    true
}

fn rank_mod(m: &mut [Vec<u64>], q: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] % q != 0) else { continue };
        m.swap(p, r);
        let inv = mod_inverse(m[r][c], q);
        for k in 0..cols {
            m[r][k] = m[r][k] * inv % q;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    m[i][k] = (m[i][k] + q * q - f * m[r][k] % q) % q;
                }
            }
        }
        r += 1;
    }
    r
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(q as i128));
    e.x.rem_euclid(q as i128) as u64
}

/// Depth `|Nm p|` of the cusps of `X0(p)` for a prime `p`.
pub fn ramified_cusp_depth_gamma0_prime(p: &FractionalIdeal) -> Result<BigRational> {
    match is_prime_ideal(p) {
        Some(false) => Err(Error::NotPrime(format!("{p}"))),
        _ => Ok(p.norm()),
    }
}

/// A stabilizer lattice with its norm form normalized to have minimum one.
#[derive(Clone, Debug)]
pub struct StabilizerLattice {
    pub lattice: FractionalIdeal,
    /// `min |Nm(x)|` over nonzero lattice points.
    pub minimum: BigRational,
    /// `1 / minimum`: multiplies `Nm` to give the normalized form `Nm_*`.
    pub norm_scale: BigRational,
    /// Per-embedding scalar `minimum^{-1/n}`.
    pub scalar: Interval,
    /// A lattice point with normalized norm one.
    pub shortest: FieldElement,
}

impl StabilizerLattice {
    /// `Nm_*(x) = |Nm(x)| / minimum`, exactly.
    pub fn normalized_norm(&self, x: &FieldElement) -> BigRational {
        x.norm().abs() * &self.norm_scale
    }

    /// `Nm_*` of the lattice vector with the given coordinates over the HNF basis.
    pub fn normalized_norm_of_coords(&self, coords: &[BigInt]) -> BigRational {
        let basis = self.lattice.basis();
        let x = coords
            .iter()
            .zip(&basis)
            .fold(self.lattice.field().zero(), |acc, (c, b)| acc + b.scale(&BigRational::from_integer(c.clone())));
        self.normalized_norm(&x)
    }
}

pub fn normalized_norm_form(lattice: &FractionalIdeal) -> Result<StabilizerLattice> {
    let (minimum, shortest) = ideal_min_with_witness(lattice)?;
    let n = lattice.field().degree() as u32;
    let scalar = Interval::exact(1.0) / Interval::from_rational(&minimum).root(n);
    Ok(StabilizerLattice {
        lattice: lattice.clone(),
        norm_scale: minimum.recip(),
        minimum,
        scalar,
        shortest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn q5() -> TotallyRealField {
        TotallyRealField::quadratic(5).unwrap()
    }

    fn gamma0(f: &TotallyRealField, k: i64) -> GroupSpec {
        GroupSpec::new(FractionalIdeal::unit(f), FractionalIdeal::from_int(f, k).unwrap(), Flavor::Gamma0).unwrap()
    }

    #[test]
    fn stabilizer_examples() {
        let f = q5();
        let inf = Cusp::infinity(&f);
        let zero = Cusp::from_element(&f.zero());
        let o = FractionalIdeal::unit(&f);
        let (l1, l2) = unipotent_stabilizers(&inf, &zero, &GroupSpec::full(&f)).unwrap();
        assert_eq!((l1, l2), (o.clone(), o.clone()));
        let (l1, l2) = unipotent_stabilizers(&inf, &zero, &gamma0(&f, 2)).unwrap();
        assert_eq!(l1, o);
        assert_eq!(l2, FractionalIdeal::from_int(&f, 2).unwrap());
        let one = Cusp::from_element(&f.one());
        let (l1, _) = unipotent_stabilizers(&one, &zero, &GroupSpec::full(&f)).unwrap();
        assert_eq!(l1, o);
        assert_eq!(unipotent_stabilizers(&one, &one, &GroupSpec::full(&f)).unwrap_err(), Error::EqualCusps);
    }

    #[test]
    fn canonicalization() {
        let f = q5();
        let a = f.element_from_ints(&[3, 1]);
        let b = f.element_from_ints(&[2, -1]);
        let c = f.element(vec![rat(-5, 3), rat(7, 2)]).unwrap();
        assert_eq!(Cusp::new(a.clone(), b.clone()).unwrap(), Cusp::new(&a * &c, &b * &c).unwrap());
        assert_eq!(Cusp::new(c.clone(), f.zero()).unwrap(), Cusp::infinity(&f));
    }

    #[test]
    fn depth_example_level_two() {
        let f = q5();
        let r = depth_product_bound(&Cusp::infinity(&f), &Cusp::from_element(&f.zero()), &gamma0(&f, 2)).unwrap();
        assert!(r.containment_holds);
        assert_eq!(r.product, int(4));
        assert!(r.bound_holds());
    }

    #[test]
    fn canonical_depth_values() {
        let v = depth_bound_from_norm(&int(25), CoverVariant::Torsion);
        assert_eq!(v.exact.as_deref(), Some("5"));
        assert_eq!(depth_bound_from_norm(&int(1), CoverVariant::Torsion).value, 1.0);
        assert_eq!(depth_bound_from_norm(&int(25), CoverVariant::Principal).exact.as_deref(), Some("25"));
        let w = depth_bound_from_norm(&int(2), CoverVariant::Torsion);
        assert!(w.exact.is_none() && w.enclosure.contains(std::f64::consts::SQRT_2));
        let f = q5();
        assert!(matches!(
            canonical_depth_bound(&GroupSpec::full(&f), CoverVariant::Torsion),
            Err(Error::WrongFlavor { .. })
        ));
        let g = GroupSpec::new(FractionalIdeal::unit(&f), FractionalIdeal::from_int(&f, 5).unwrap(), Flavor::Gamma1)
            .unwrap();
        assert_eq!(canonical_depth_bound(&g, CoverVariant::Torsion).unwrap().exact.as_deref(), Some("5"));
    }

    #[test]
    fn prime_depths() {
        let f = q5();
        let sqrt5 = FractionalIdeal::principal(&f.element_from_ints(&[-1, 2])).unwrap();
        assert_eq!(ramified_cusp_depth_gamma0_prime(&sqrt5).unwrap(), int(5));
        // 2 is inert in Q(sqrt5): (2) is prime of norm 4.
        let two = FractionalIdeal::from_int(&f, 2).unwrap();
        assert_eq!(ramified_cusp_depth_gamma0_prime(&two).unwrap(), int(4));
        let f2 = TotallyRealField::quadratic(2).unwrap();
        let root2 = FractionalIdeal::principal(&f2.element_from_ints(&[0, 1])).unwrap();
        assert_eq!(ramified_cusp_depth_gamma0_prime(&root2).unwrap(), int(2));
        assert!(matches!(ramified_cusp_depth_gamma0_prime(&FractionalIdeal::unit(&f)), Err(Error::NotPrime(_))));
        // 11 splits in Q(sqrt5), so (11) is not prime.
        assert_eq!(is_prime_ideal(&FractionalIdeal::from_int(&f, 11).unwrap()), Some(false));
        assert_eq!(is_prime_ideal(&FractionalIdeal::from_int(&f, 6).unwrap()), Some(false));
        assert_eq!(is_prime_ideal(&FractionalIdeal::from_int(&f, 7).unwrap()), Some(true));
    }

    #[test]
    fn normalized_forms() {
        let f = q5();
        let o = normalized_norm_form(&FractionalIdeal::unit(&f)).unwrap();
        assert_eq!(o.norm_scale, int(1));
        let two = normalized_norm_form(&FractionalIdeal::from_int(&f, 2).unwrap()).unwrap();
        assert_eq!(two.norm_scale, rat(1, 4));
        assert!(two.scalar.contains(0.5));
        let s5 = normalized_norm_form(&FractionalIdeal::principal(&f.element_from_ints(&[-1, 2])).unwrap()).unwrap();
        assert_eq!(s5.norm_scale, rat(1, 5));
        assert_eq!(s5.normalized_norm(&s5.shortest), int(1));
    }
}
