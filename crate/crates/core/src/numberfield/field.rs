use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{self, RatMatrix};
use crate::poly::{isolate_real_roots, refine_root, Poly, SturmSequence};
use crate::rational::{format_rational, int, RatInterval};

/// Width of the isolating intervals kept for each real root.
const ROOT_BITS: u32 = 96;

/// A totally real number field together with an integral basis of its ring
/// of integers and certified enclosures of its real embeddings.
///
/// Cloning is cheap: the data is shared.
#[derive(Clone)]
pub struct TotallyRealField {
    inner: Arc<FieldData>,
}

struct FieldData {
    degree: usize,
    min_poly: Vec<BigInt>,
    poly: Poly,
    /// Row `i` is the `i`-th basis element in power-basis coordinates.
    basis: RatMatrix,
    basis_inv: RatMatrix,
    /// `mult[i][j][k]`: coefficient of `w_k` in `w_i * w_j`.
    mult: Vec<Vec<Vec<BigInt>>>,
    trace_form: Vec<Vec<BigInt>>,
    /// Isolating intervals of the roots, in descending order.
    roots: Vec<RatInterval>,
    /// `embeddings[i][j]` encloses `sigma_i(w_j)`.
    embeddings: Vec<Vec<Interval>>,
    one: Vec<BigRational>,
    units: Vec<Vec<BigRational>>,
    totally_positive_units: Vec<Vec<BigRational>>,
    label: String,
}

impl fmt::Debug for TotallyRealField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TotallyRealField({})", self.inner.label)
    }
}

impl PartialEq for TotallyRealField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.min_poly == other.inner.min_poly && self.inner.basis == other.inner.basis)
    }
}

impl Eq for TotallyRealField {}

fn squarefree_part(mut d: BigInt) -> (BigInt, BigInt) {
    // d = f^2 * core with core squarefree; returns (core, f).
    let sign = if d.is_negative() { -BigInt::one() } else { BigInt::one() };
    d = d.abs();
    let mut core = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= d {
        let mut e = 0u32;
        while (&d % &p).is_zero() {
            d /= &p;
            e += 1;
        }
        if e > 0 {
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += 1;
    }
    core *= d;
    (sign * core, f)
}

fn poly_mul_mod(a: &[BigRational], b: &[BigRational], modulus: &Poly) -> Vec<BigRational> {
    let prod = Poly::new(a.to_vec()).mul(&Poly::new(b.to_vec()));
    let r = prod.rem(modulus);
    let n = modulus.degree().unwrap();
    let mut out = r.coeffs().to_vec();
    out.resize(n, BigRational::zero());
    out
}

impl TotallyRealField {
    /// Builds a field from a monic integer polynomial (constant term first)
    /// and, optionally, an integral basis given in power-basis coordinates.
    ///
    /// Without a basis only quadratic polynomials are accepted; the maximal
    /// order `Z[1, sqrt d]` or `Z[1, (1 + sqrt d)/2]` is then used.
    pub fn new(min_poly: &[BigInt], integral_basis: Option<RatMatrix>) -> Result<Self> {
        let degree = min_poly.len().saturating_sub(1);
        if degree < 2 {
            return Err(Error::UnsupportedDegree { degree, reason: "field degree must be at least 2" });
        }
        if !min_poly[degree].is_one() {
            return Err(Error::InvalidInput("minimal polynomial must be monic".into()));
        }
        let poly = Poly::from_ints(min_poly);
        if !poly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let found = SturmSequence::new(&poly).count_real_roots();
        if found != degree {
            return Err(Error::NotTotallyReal { degree, found });
        }
        let width = BigRational::new(BigInt::one(), BigInt::one() << ROOT_BITS);
        let roots: Vec<RatInterval> =
            isolate_real_roots(&poly).iter().map(|r| refine_root(&poly, r, &width)).collect();
        if roots.iter().any(|r| r.lo == r.hi) {
            return Err(Error::Reducible);
        }
        check_irreducible(&poly, &roots)?;

        let (basis, label) = match integral_basis {
            Some(b) => {
                let label = format!("Q[x]/({})", poly_label(min_poly));
                (b, label)
            }
            None => {
                if degree != 2 {
                    return Err(Error::UnsupportedDegree {
                        degree,
                        reason: "an integral basis must be supplied for degree >= 3",
                    });
                }
                quadratic_basis(min_poly)
            }
        };
        if basis.len() != degree || basis.iter().any(|r| r.len() != degree) {
            return Err(Error::InvalidInput(format!("integral basis must be {degree} x {degree}")));
        }
        let basis_inv = linalg::inverse(&basis)
            .ok_or_else(|| Error::NotARing("integral basis is not linearly independent".into()))?;

        let mut one_power = vec![BigRational::zero(); degree];
        one_power[0] = BigRational::one();
        let one = linalg::vec_mat(&one_power, &basis_inv);
        if one.iter().any(|c| !c.is_integer()) {
            return Err(Error::NotARing("1 is not in the span of the basis".into()));
        }

        let mut mult = vec![vec![Vec::new(); degree]; degree];
        for i in 0..degree {
            for j in 0..degree {
                let p = poly_mul_mod(&basis[i], &basis[j], &poly);
                let c = linalg::vec_mat(&p, &basis_inv);
                if c.iter().any(|x| !x.is_integer()) {
                    return Err(Error::NotARing(format!("w_{i} * w_{j} has non-integral coordinates")));
                }
                mult[i][j] = c.into_iter().map(|x| x.to_integer()).collect();
            }
        }

        let mut data = FieldData {
            degree,
            min_poly: min_poly.to_vec(),
            poly,
            basis,
            basis_inv,
            mult,
            trace_form: Vec::new(),
            roots,
            embeddings: Vec::new(),
            one,
            units: Vec::new(),
            totally_positive_units: Vec::new(),
            label,
        };
        data.embeddings = (0..degree)
            .map(|i| (0..degree).map(|j| eval_interval(&data, &data.basis[j], i).to_interval()).collect())
            .collect();
        let mut field = TotallyRealField { inner: Arc::new(data) };
        let tf: Vec<Vec<BigInt>> = (0..degree)
            .map(|i| {
                (0..degree)
                    .map(|j| {
                        let w = field.basis_element(i) * field.basis_element(j);
                        field.trace(&w).to_integer()
                    })
                    .collect()
            })
            .collect();
        Arc::get_mut(&mut field.inner).expect("unique").trace_form = tf;
        Ok(field)
    }

    /// Real quadratic field `Q(sqrt d)` with its maximal order.
    pub fn quadratic(d: i64) -> Result<Self> {
        Self::new(&[BigInt::from(-d), BigInt::zero(), BigInt::one()], None)
    }

    /// Attaches unit data; each unit is validated to have norm +-1 and be integral.
    pub fn with_units(
        self,
        fundamental: Vec<Vec<BigRational>>,
        totally_positive: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        for u in fundamental.iter().chain(totally_positive.iter()) {
            let x = self.element(u.clone())?;
            if !x.is_integral() || !self.norm(&x).abs().is_one() {
                return Err(Error::NotAUnit(format!("{x}")));
            }
        }
        for u in &totally_positive {
            let x = self.element(u.clone())?;
            if !self.is_totally_positive(&x) {
                return Err(Error::NotAUnit(format!("{x} is not totally positive")));
            }
        }
        let data = FieldData {
            degree: self.inner.degree,
            min_poly: self.inner.min_poly.clone(),
            poly: self.inner.poly.clone(),
            basis: self.inner.basis.clone(),
            basis_inv: self.inner.basis_inv.clone(),
            mult: self.inner.mult.clone(),
            trace_form: self.inner.trace_form.clone(),
            roots: self.inner.roots.clone(),
            embeddings: self.inner.embeddings.clone(),
            one: self.inner.one.clone(),
            units: fundamental,
            totally_positive_units: totally_positive,
            label: self.inner.label.clone(),
        };
        Ok(TotallyRealField { inner: Arc::new(data) })
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.inner.min_poly
    }

    pub fn poly(&self) -> &Poly {
        &self.inner.poly
    }

    pub fn integral_basis(&self) -> &RatMatrix {
        &self.inner.basis
    }

    pub fn trace_form(&self) -> &[Vec<BigInt>] {
        &self.inner.trace_form
    }

    pub fn supplied_units(&self) -> &[Vec<BigRational>] {
        &self.inner.units
    }

    pub fn supplied_totally_positive_units(&self) -> &[Vec<BigRational>] {
        &self.inner.totally_positive_units
    }

    /// Discriminant: determinant of the trace form on the integral basis.
    pub fn discriminant(&self) -> BigInt {
        linalg::det_int(&self.inner.trace_form)
    }

    pub fn root_intervals(&self) -> &[RatInterval] {
        &self.inner.roots
    }

    /// Enclosures of `sigma_i(w_j)`.
    pub fn basis_embeddings(&self) -> &[Vec<Interval>] {
        &self.inner.embeddings
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::InvalidInput(format!(
                "element needs {} coordinates, got {}",
                self.degree(),
                coords.len()
            )));
        }
        Ok(FieldElement { field: self.clone(), coords })
    }

    pub fn element_from_ints(&self, coords: &[i64]) -> FieldElement {
        assert_eq!(coords.len(), self.degree());
        FieldElement { field: self.clone(), coords: coords.iter().map(|&c| int(c)).collect() }
    }

    pub fn element_from_bigints(&self, coords: &[BigInt]) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coords: coords.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    /// Element given by coordinates in the power basis `1, x, x^2, ...`.
    pub fn from_power_coords(&self, p: &[BigRational]) -> FieldElement {
        let mut v = p.to_vec();
        v.resize(self.degree(), BigRational::zero());
        FieldElement { field: self.clone(), coords: linalg::vec_mat(&v, &self.inner.basis_inv) }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: self.inner.one.clone() }
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElement {
        FieldElement { field: self.clone(), coords: self.inner.one.iter().map(|c| c * q).collect() }
    }

    pub fn from_int(&self, k: i64) -> FieldElement {
        self.from_rational(&int(k))
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree()];
        coords[i] = BigRational::one();
        FieldElement { field: self.clone(), coords }
    }

    /// The class of `x` in `Q[x]/(f)`.
    pub fn generator(&self) -> FieldElement {
        let mut p = vec![BigRational::zero(); self.degree()];
        p[1] = BigRational::one();
        self.from_power_coords(&p)
    }

    pub fn power_coords(&self, x: &FieldElement) -> Vec<BigRational> {
        linalg::vec_mat(&x.coords, &self.inner.basis)
    }

    fn mul_coords(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut out = vec![BigRational::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let p = ai * bj;
                for (k, t) in self.inner.mult[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &p * BigRational::from_integer(t.clone());
                    }
                }
            }
        }
        out
    }

    /// Matrix `L` of multiplication by `x`: `(x y)_k = sum_j L[k][j] y_j`.
    pub fn mult_matrix(&self, x: &FieldElement) -> RatMatrix {
        let n = self.degree();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, row) in self.inner.mult[i].iter().enumerate() {
                for (k, t) in row.iter().enumerate() {
                    if !t.is_zero() {
                        m[k][j] += xi * BigRational::from_integer(t.clone());
                    }
                }
            }
        }
        m
    }

    /// Exact norm `prod_i sigma_i(x)`.
    pub fn norm(&self, x: &FieldElement) -> BigRational {
        linalg::det(&self.mult_matrix(x))
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let m = self.mult_matrix(x);
        (0..self.degree()).fold(BigRational::zero(), |acc, i| acc + &m[i][i])
    }

    pub fn inverse(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.is_zero() {
            return None;
        }
        let m = self.mult_matrix(x);
        let inv = linalg::inverse(&m)?;
        // y = M^{-1} e
        let n = self.degree();
        let coords =
            (0..n).map(|k| (0..n).fold(BigRational::zero(), |acc, j| acc + &inv[k][j] * &self.inner.one[j])).collect();
        Some(FieldElement { field: self.clone(), coords })
    }

    /// Exact rational enclosures of all embeddings, each of width at most `precision`.
    pub fn embed(&self, x: &FieldElement, precision: f64) -> Vec<RatInterval> {
        assert!(precision > 0.0, "precision must be positive");
        let target = BigRational::from_float(precision).expect("finite precision");
        let p = self.power_coords(x);
        (0..self.degree())
            .map(|i| {
                let mut root = self.inner.roots[i].clone();
                loop {
                    let v = Poly::new(p.clone()).eval_interval(&root);
                    if v.width() <= target {
                        return v;
                    }
                    let w = root.width() / int(1 << 16);
                    root = refine_root(&self.inner.poly, &root, &w);
                    if root.lo == root.hi {
                        return Poly::new(p.clone()).eval_interval(&root);
                    }
                }
            })
            .collect()
    }

    /// Floating-point enclosures of all embeddings (fast path).
    pub fn embed_interval(&self, x: &FieldElement) -> Vec<Interval> {
        let coords: Vec<Interval> = x.coords.iter().map(Interval::from_rational).collect();
        self.inner
            .embeddings
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&coords)
                    .fold(Interval::exact(0.0), |acc, (e, c)| acc + *e * *c)
            })
            .collect()
    }

    pub fn embed_f64(&self, x: &FieldElement) -> Vec<f64> {
        self.embed_interval(x).iter().map(|i| i.mid()).collect()
    }

    /// Exact sign of `sigma_i(x)`.
    pub fn sign_at(&self, x: &FieldElement, i: usize) -> Ordering {
        if x.is_zero() {
            return Ordering::Equal;
        }
        let fast = self.embed_interval(x)[i];
        if fast.is_positive() {
            return Ordering::Greater;
        }
        if fast.is_negative() {
            return Ordering::Less;
        }
        let p = Poly::new(self.power_coords(x));
        let mut root = self.inner.roots[i].clone();
        loop {
            if let Some(s) = p.eval_interval(&root).sign() {
                return s;
            }
            let w = root.width() / int(1 << 32);
            root = refine_root(&self.inner.poly, &root, &w);
        }
    }

    /// Exact comparison of `sigma_i(x)` with `sigma_i(y)`.
    pub fn cmp_at(&self, x: &FieldElement, y: &FieldElement, i: usize) -> Ordering {
        self.sign_at(&(x - y), i)
    }

    /// Exact comparison of `sigma_i(x)` with a rational number.
    pub fn cmp_at_rational(&self, x: &FieldElement, q: &BigRational, i: usize) -> Ordering {
        self.sign_at(&(x - &self.from_rational(q)), i)
    }

    pub fn is_totally_positive(&self, x: &FieldElement) -> bool {
        (0..self.degree()).all(|i| self.sign_at(x, i) == Ordering::Greater)
    }

    /// Galois conjugate for quadratic fields.
    pub fn conjugate(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.degree() != 2 {
            return Err(Error::UnsupportedDegree { degree: self.degree(), reason: "conjugation is quadratic-only" });
        }
        // theta' = -a1 - theta for x^2 + a1 x + a0.
        let p = self.power_coords(x);
        let a1 = BigRational::from_integer(self.inner.min_poly[1].clone());
        let q = vec![&p[0] - &p[1] * &a1, -p[1].clone()];
        Ok(self.from_power_coords(&q))
    }

    /// `floor(sigma_i(x) / sigma_i(y))`, exactly; `sigma_i(y)` must be nonzero.
    pub fn floor_ratio_at(&self, x: &FieldElement, y: &FieldElement, i: usize) -> BigInt {
        let sy = self.sign_at(y, i);
        assert!(sy != Ordering::Equal, "division by zero embedding");
        let ex = self.embed_interval(x)[i];
        let ey = self.embed_interval(y)[i];
        let approx = (ex.mid() / ey.mid()).floor();
        let mut m = if approx.is_finite() {
            BigInt::from(approx as i128)
        } else {
            BigInt::zero()
        };
        // Require sigma_i(x - m y) / sigma_i(y) in [0, 1).
        loop {
            let r = x - &(y * &self.from_rational(&BigRational::from_integer(m.clone())));
            let s = self.sign_at(&r, i);
            let below = if sy == Ordering::Greater { s == Ordering::Less } else { s == Ordering::Greater };
            if below {
                m -= 1;
                continue;
            }
            let r1 = &r - y;
            let s1 = self.sign_at(&r1, i);
            let ok = if sy == Ordering::Greater { s1 == Ordering::Less } else { s1 == Ordering::Greater };
            if ok {
                return m;
            }
            m += 1;
        }
    }
}

fn poly_label(c: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let mon = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let coef = if a.abs().is_one() && i > 0 {
            if a.is_negative() { "-".to_string() } else { String::new() }
        } else {
            a.to_string()
        };
        terms.push(format!("{coef}{mon}"));
    }
    terms.join(" + ").replace("+ -", "- ")
}

fn quadratic_basis(min_poly: &[BigInt]) -> (RatMatrix, String) {
    let a0 = &min_poly[0];
    let a1 = &min_poly[1];
    let disc = a1 * a1 - BigInt::from(4) * a0;
    let (d, f) = squarefree_part(disc);
    // sqrt(d) = (2 theta + a1) / f in the power basis.
    let fq = BigRational::from_integer(f);
    let sqrt_d = vec![BigRational::from_integer(a1.clone()) / &fq, int(2) / &fq];
    let second = if d.mod_floor(&BigInt::from(4)) == BigInt::one() {
        vec![(&sqrt_d[0] + int(1)) / int(2), &sqrt_d[1] / int(2)]
    } else {
        sqrt_d
    };
    let basis = vec![vec![int(1), int(0)], second];
    (basis, format!("Q(sqrt{d})"))
}

/// A monic integer factor of a totally real polynomial has a subset of its
/// roots; test every subset product for integral coefficients.
fn check_irreducible(poly: &Poly, roots: &[RatInterval]) -> Result<()> {
    let n = roots.len();
    if n > 20 {
        return Ok(());
    }
    let r: Vec<Interval> = roots.iter().map(|x| x.to_interval()).collect();
    for mask in 1u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        if k > n / 2 || (k * 2 == n && mask & 1 == 0) {
            continue;
        }
        let mut coeffs = vec![Interval::exact(1.0)];
        for (i, ri) in r.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let mut next = vec![Interval::exact(0.0); coeffs.len() + 1];
            for (j, c) in coeffs.iter().enumerate() {
                next[j + 1] = next[j + 1] + *c;
                next[j] = next[j] - *c * *ri;
            }
            coeffs = next;
        }
        let mut candidate = Vec::with_capacity(coeffs.len());
        let mut integral = true;
        for c in &coeffs {
            let lo = c.lo.ceil();
            if lo > c.hi.floor() {
                integral = false;
                break;
            }
            candidate.push(BigInt::from(lo as i128));
        }
        if !integral {
            continue;
        }
        let g = Poly::from_ints(&candidate);
        if poly.rem(&g).is_zero() {
            return Err(Error::Reducible);
        }
    }
    Ok(())
}

fn eval_interval(data: &FieldData, power: &[BigRational], i: usize) -> RatInterval {
    Poly::new(power.to_vec()).eval_interval(&data.roots[i])
}

/// An element of a totally real field, in coordinates over the integral basis.
#[derive(Clone)]
pub struct FieldElement {
    field: TotallyRealField,
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn field(&self) -> &TotallyRealField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords == self.field.inner.one
    }

    /// True when the element lies in the order spanned by the integral basis.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn norm(&self) -> BigRational {
        self.field.norm(self)
    }

    pub fn trace(&self) -> BigRational {
        self.field.trace(self)
    }

    pub fn inverse(&self) -> Option<FieldElement> {
        self.field.inverse(self)
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, k: u32) -> FieldElement {
        let mut acc = self.field.one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Least positive integer `m` with `m * self` integral.
    pub fn denominator(&self) -> BigInt {
        crate::rational::lcm_of_denominators(self.coords.iter())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.field.embed_f64(self)
    }

    pub fn coords_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coords_strings().join(", "))
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.field.mul_coords(&self.coords, &o.coords) }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: &FieldElement) -> FieldElement {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
