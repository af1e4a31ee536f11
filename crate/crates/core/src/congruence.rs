//! The groups `SL(O ⊕ a)` and their congruence subgroups `Γ0(n)`, `Γ1(n)`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::{
    element_to_spec, enumerate_box, ElementSpec, FieldElement, FieldSpec, FractionalIdeal, IdealSpec,
    TotallyRealField, DEFAULT_BOX_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Full,
    Gamma0,
    Gamma1,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Full => "full",
            Flavor::Gamma0 => "gamma0",
            Flavor::Gamma1 => "gamma1",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Flavor::Full),
            "gamma0" => Ok(Flavor::Gamma0),
            "gamma1" => Ok(Flavor::Gamma1),
            other => Err(Error::InvalidInput(format!("unknown group flavor {other:?}"))),
        }
    }
}

/// A matrix `[[a, b], [c, d]]` with entries in the field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl GroupElement {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        GroupElement { a, b, c, d }
    }

    pub fn identity(field: &TotallyRealField) -> Self {
        GroupElement::new(field.one(), field.zero(), field.zero(), field.one())
    }

    /// `[[1, b], [0, 1]]`.
    pub fn translation(b: &FieldElement) -> Self {
        let f = b.field();
        GroupElement::new(f.one(), b.clone(), f.zero(), f.one())
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn inversion(field: &TotallyRealField) -> Self {
        GroupElement::new(field.zero(), -field.one(), field.one(), field.zero())
    }

    pub fn field(&self) -> &TotallyRealField {
        self.a.field()
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> GroupElement {
        GroupElement { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// `(g - 1)^2 = 0`, i.e. `g` is unipotent.
    pub fn is_unipotent(&self) -> bool {
        let f = self.field();
        let m = GroupElement { a: &self.a - &f.one(), b: self.b.clone(), c: self.c.clone(), d: &self.d - &f.one() };
        let sq = m.mul(&m);
        sq.a.is_zero() && sq.b.is_zero() && sq.c.is_zero() && sq.d.is_zero()
    }

    fn sort_key(&self) -> Vec<BigRational> {
        [&self.a, &self.b, &self.c, &self.d].iter().flat_map(|x| x.coords().to_vec()).collect()
    }

    pub fn to_spec(&self) -> [ElementSpec; 4] {
        [element_to_spec(&self.a), element_to_spec(&self.b), element_to_spec(&self.c), element_to_spec(&self.d)]
    }
}

/// `Γ(1) = SL(O ⊕ a)` or one of its congruence subgroups of level `n`.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    field: TotallyRealField,
    module_ideal: FractionalIdeal,
    module_inverse: FractionalIdeal,
    level: FractionalIdeal,
    lower_left: FractionalIdeal,
    flavor: Flavor,
}

impl GroupSpec {
    pub fn new(module_ideal: FractionalIdeal, level: FractionalIdeal, flavor: Flavor) -> Result<Self> {
        let field = module_ideal.field().clone();
        if level.field() != &field {
            return Err(Error::InvalidInput("module ideal and level live in different fields".into()));
        }
        if !level.is_integral() {
            return Err(Error::InvalidInput("the level must be an integral ideal".into()));
        }
        let module_inverse = module_ideal.inverse()?;
        let lower_left = match flavor {
            Flavor::Full => module_ideal.clone(),
            Flavor::Gamma0 | Flavor::Gamma1 => module_ideal.product(&level),
        };
        Ok(GroupSpec { field, module_ideal, module_inverse, level, lower_left, flavor })
    }

    /// `SL2(O)`.
    pub fn full(field: &TotallyRealField) -> Self {
        let o = FractionalIdeal::unit(field);
        GroupSpec::new(o.clone(), o, Flavor::Full).expect("unit ideal is invertible")
    }

    pub fn field(&self) -> &TotallyRealField {
        &self.field
    }

    pub fn module_ideal(&self) -> &FractionalIdeal {
        &self.module_ideal
    }

    pub fn level(&self) -> &FractionalIdeal {
        &self.level
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// The ideal the lower-left entry ranges over: `a` or `a n`.
    pub fn lower_left_ideal(&self) -> &FractionalIdeal {
        &self.lower_left
    }

    /// The effective level: `O` for the full group.
    pub fn effective_level(&self) -> FractionalIdeal {
        match self.flavor {
            Flavor::Full => FractionalIdeal::unit(&self.field),
            _ => self.level.clone(),
        }
    }

    /// Determinant one, `a, d` integral, `b` in `a^{-1}`, `c` in `a`.
    pub fn check_ambient(&self, g: &GroupElement) -> Result<()> {
        if !g.det().is_one() {
            return Err(Error::NotInAmbientGroup("determinant is not 1".into()));
        }
        if !g.a.is_integral() || !g.d.is_integral() {
            return Err(Error::NotInAmbientGroup("diagonal entries must be integral".into()));
        }
        if !self.module_inverse.contains(&g.b) {
            return Err(Error::NotInAmbientGroup("upper-right entry is not in the inverse module ideal".into()));
        }
        if !self.module_ideal.contains(&g.c) {
            return Err(Error::NotInAmbientGroup("lower-left entry is not in the module ideal".into()));
        }
        Ok(())
    }

    pub fn is_member(&self, g: &GroupElement) -> Result<bool> {
        self.check_ambient(g)?;
        Ok(self.congruence_conditions(g))
    }

    fn congruence_conditions(&self, g: &GroupElement) -> bool {
        let one = self.field.one();
        match self.flavor {
            Flavor::Full => true,
            Flavor::Gamma0 => self.lower_left.contains(&g.c),
            Flavor::Gamma1 => {
                self.lower_left.contains(&g.c)
                    && self.level.contains(&(&g.a - &one))
                    && self.level.contains(&(&g.d - &one))
            }
        }
    }

    /// True when `|Nm n| > 4^n`, which rules out elliptic elements in `Γ1(n)`.
    pub fn elliptic_free_guarantee(&self) -> Result<bool> {
        if self.flavor != Flavor::Gamma1 {
            return Err(Error::WrongFlavor { expected: "gamma1", found: self.flavor.name() });
        }
        Ok(elliptic_free_by_norm(self.field.degree(), &self.level.norm()))
    }

    /// Every group element whose four entries have all embeddings in `[-H, H]`,
    /// sorted by coordinates.
    pub fn enumerate_elements(&self, height: &BigRational, cap: u128) -> Result<Vec<GroupElement>> {
        if !height.is_positive() {
            return Err(Error::InvalidInput("height bound must be positive".into()));
        }
        let n = self.field.degree();
        let bounds = vec![height.clone(); n];
        let box_points = |ideal: &FractionalIdeal| enumerate_box(&self.field, &ideal.basis(), &bounds, cap);
        let diag = box_points(&FractionalIdeal::unit(&self.field))?;
        let lower = box_points(&self.lower_left)?;
        let upper = box_points(&self.module_inverse)?;
        let work = (diag.len() as u128).saturating_mul(diag.len() as u128).saturating_mul(lower.len() as u128);
        if work > cap {
            return Err(Error::BoxTooLarge { points: work, cap });
        }
        let in_box = |x: &FieldElement| {
            (0..n).all(|i| {
                self.field.cmp_at_rational(x, height, i) != Ordering::Greater
                    && self.field.cmp_at_rational(x, &-height, i) != Ordering::Less
            })
        };
        let one = self.field.one();
        let mut out = Vec::new();
        for a in &diag {
            for d in &diag {
                let ad1 = &(a * d) - &one;
                for c in &lower {
                    if c.is_zero() {
                        if !ad1.is_zero() {
                            continue;
                        }
                        for b in &upper {
                            let g = GroupElement::new(a.clone(), b.clone(), c.clone(), d.clone());
                            if self.congruence_conditions(&g) {
                                out.push(g);
                            }
                        }
                        continue;
                    }
                    let b = &ad1 * &c.inverse().expect("nonzero");
                    if !self.module_inverse.contains(&b) || !in_box(&b) {
                        continue;
                    }
                    let g = GroupElement::new(a.clone(), b, c.clone(), d.clone());
                    if self.congruence_conditions(&g) {
                        out.push(g);
                    }
                }
            }
        }
        out.sort_by_key(GroupElement::sort_key);
        Ok(out)
    }

    /// Minimal `|Nm(c)|` over enumerated elements with `c != 0`; exact within the box.
    pub fn min_lower_left_norm(&self, height: &BigRational, cap: u128) -> Result<Option<BigRational>> {
        Ok(self
            .enumerate_elements(height, cap)?
            .iter()
            .filter(|g| !g.c.is_zero())
            .map(|g| g.c.norm().abs())
            .min())
    }

    pub fn min_lower_left_norm_default(&self, height: &BigRational) -> Result<Option<BigRational>> {
        self.min_lower_left_norm(height, DEFAULT_BOX_CAP)
    }
}

/// `|Nm n| > 4^degree`.
pub fn elliptic_free_by_norm(degree: usize, norm: &BigRational) -> bool {
    let bound = BigRational::from_integer(num_bigint::BigInt::from(4).pow(degree as u32));
    norm.abs() > bound
}

/// `{"field": ..., "a": ..., "level": ..., "flavor": "gamma1"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecJson {
    pub field: FieldSpec,
    #[serde(default)]
    pub a: Option<IdealSpec>,
    #[serde(default)]
    pub level: Option<IdealSpec>,
    pub flavor: Flavor,
}

impl GroupSpecJson {
    pub fn build(&self) -> Result<GroupSpec> {
        let field = self.field.build()?;
        let a = match &self.a {
            Some(s) => s.build(&field)?,
            None => FractionalIdeal::unit(&field),
        };
        let level = match &self.level {
            Some(s) => s.build(&field)?,
            None => FractionalIdeal::unit(&field),
        };
        GroupSpec::new(a, level, self.flavor)
    }
}

impl GroupElement {
    /// Largest absolute value of any embedding of any entry (approximate).
    pub fn height_f64(&self) -> f64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .flat_map(|x| x.to_f64())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}
