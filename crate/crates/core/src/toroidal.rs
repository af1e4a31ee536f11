//! Fans over the positive cone of a translation lattice, cusp resolution
//! cycles for quadratic fields, Lelong numbers of the boundary strata and the
//! boundary coefficients of the nef divisors built from them.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cusps::StabilizerLattice;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg;
use crate::numberfield::{enumerate_box, reduce_basis, DEFAULT_BOX_CAP};
use crate::numberfield::{element_from_spec, element_to_spec, ElementSpec, FieldElement, FractionalIdeal, IdealSpec, TotallyRealField};
use crate::rational::format_rational;

/// Rays per period beyond which the resolution is abandoned.
const MAX_PERIOD: usize = 100_000;

/// A rational polyhedral cone spanned by totally positive lattice vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    generators: Vec<FieldElement>,
}

impl Cone {
    pub fn new(generators: Vec<FieldElement>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidInput("a cone needs at least one generator".into()));
        };
        let field = first.field().clone();
        if generators.len() > field.degree() {
            return Err(Error::InvalidInput(format!(
                "{} generators exceed the dimension {}",
                generators.len(),
                field.degree()
            )));
        }
        for g in &generators {
            if !field.is_totally_positive(g) {
                return Err(Error::InvalidInput(format!("cone generator {g} is not totally positive")));
            }
        }
        Ok(Cone { generators })
    }

    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn field(&self) -> &TotallyRealField {
        self.generators[0].field()
    }

    /// Sum of the generators.
    pub fn weight(&self) -> FieldElement {
        self.weighted_sum(&vec![BigInt::one(); self.generators.len()])
    }

    fn weighted_sum(&self, orders: &[BigInt]) -> FieldElement {
        self.generators
            .iter()
            .zip(orders)
            .fold(self.field().zero(), |acc, (g, m)| acc + g.scale(&BigRational::from_integer(m.clone())))
    }

    /// Integer coordinates of the generators over the lattice's HNF basis.
    pub fn coordinates(&self, lattice: &FractionalIdeal) -> Result<Vec<Vec<BigInt>>> {
        self.generators
            .iter()
            .map(|g| lattice.coordinates(g).ok_or_else(|| Error::InvalidInput(format!("{g} is not in the lattice"))))
            .collect()
    }

    /// Every generator is primitive in the lattice.
    pub fn is_primitive_in(&self, lattice: &FractionalIdeal) -> Result<bool> {
        Ok(self.coordinates(lattice)?.iter().all(|c| is_primitive(c)))
    }

    /// Faces spanned by nonempty subsets of the generators, the cone itself last.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.generators.len();
        let mut masks: Vec<u32> = (1..(1u32 << k)).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        masks
            .into_iter()
            .map(|m| Cone {
                generators: (0..k).filter(|i| m & (1 << i) != 0).map(|i| self.generators[i].clone()).collect(),
            })
            .collect()
    }
}

fn is_primitive(coords: &[BigInt]) -> bool {
    coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c)).is_one()
}

/// Whether a full-dimensional cone is generated by a basis of the lattice.
pub fn is_smooth(cone: &Cone, lattice: &FractionalIdeal) -> Result<bool> {
    let n = lattice.field().degree();
    let coords = cone.coordinates(lattice)?;
    let rank = linalg::rank(&linalg::to_rat(&coords));
    if coords.len() != n || rank != n {
        return Err(Error::NotFullDimensional { generators: coords.len(), rank });
    }
    Ok(linalg::det_int(&coords).abs().is_one())
}

/// Sign of `sigma_1(x) sigma_2(y) - sigma_2(x) sigma_1(y)` in a quadratic
/// field; positive when `y` lies closer to the second embedding's axis.
fn orientation(x: &FieldElement, y: &FieldElement) -> Ordering {
    let f = x.field();
    let xc = f.conjugate(x).expect("quadratic");
    let yc = f.conjugate(y).expect("quadratic");
    f.sign_at(&(x * &yc - &xc * y), 0)
}

/// `next = b cur - prev` with the least `b` making `next` positive at
/// embedding `i`; walking with `i = 0` moves along the boundary towards the
/// second axis, `i = 1` towards the first.
fn hull_step(prev: &FieldElement, cur: &FieldElement, i: usize) -> (BigInt, FieldElement) {
    let f = cur.field();
    let b: BigInt = f.floor_ratio_at(prev, cur, i) + 1;
    let next = cur.scale(&BigRational::from_integer(b.clone())) - prev.clone();
    (b, next)
}

fn check_lattice_unit(lattice: &FractionalIdeal, unit: &FieldElement) -> Result<()> {
    let f = lattice.field();
    if !unit.is_integral() || !unit.norm().abs().is_one() {
        return Err(Error::NotAUnit(format!("{unit}")));
    }
    if !f.is_totally_positive(unit) || unit.is_one() {
        return Err(Error::InvalidInput(format!("{unit} is not a nontrivial totally positive unit")));
    }
    if &lattice.scale(unit)? != lattice {
        return Err(Error::InvalidInput(format!("{unit} does not preserve the lattice")));
    }
    Ok(())
}

/// One period of a fan over the positive cone, with the units acting on it.
#[derive(Clone, Debug)]
pub struct Fan {
    lattice: FractionalIdeal,
    units: Vec<FieldElement>,
    cones: Vec<Cone>,
    /// Rays of the period and the self-intersection cycle, quadratic case.
    rays: Vec<FieldElement>,
    cycle: Option<Vec<BigInt>>,
}

/// Outcome of the structural checks on a fan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FanCheck {
    pub smooth: bool,
    pub primitive: bool,
    pub invariant: Option<bool>,
    pub tiles_period: Option<bool>,
    pub cycle_consistent: Option<bool>,
    pub problems: Vec<String>,
}

impl FanCheck {
    pub fn passed(&self) -> bool {
        self.smooth
            && self.primitive
            && self.invariant != Some(false)
            && self.tiles_period != Some(false)
            && self.cycle_consistent != Some(false)
    }
}

impl Fan {
    /// A user-supplied fan, given by its top cones in one period.
    pub fn from_cones(lattice: FractionalIdeal, units: Vec<FieldElement>, cones: Vec<Cone>) -> Result<Self> {
        let n = lattice.field().degree();
        if units.len() + 1 != n {
            return Err(Error::InvalidInput(format!("expected {} units, got {}", n - 1, units.len())));
        }
        for u in &units {
            check_lattice_unit(&lattice, u)?;
        }
        if cones.is_empty() {
            return Err(Error::InvalidFan("no cones".into()));
        }
        if let Some(c) = cones.iter().find(|c| c.dimension() != n) {
            return Err(Error::InvalidFan(format!("top cone of dimension {} in degree {n}", c.dimension())));
        }
        let mut rays: Vec<FieldElement> = Vec::new();
        for c in &cones {
            for g in c.generators() {
                if !rays.contains(g) {
                    rays.push(g.clone());
                }
            }
        }
        Ok(Fan { lattice, units, cones, rays, cycle: None })
    }

    pub fn lattice(&self) -> &FractionalIdeal {
        &self.lattice
    }

    pub fn units(&self) -> &[FieldElement] {
        &self.units
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Rays of one period. For a resolution fan they are ordered so that the
    /// ratio `sigma_1 / sigma_2` decreases.
    pub fn rays(&self) -> &[FieldElement] {
        &self.rays
    }

    /// `b_k` with `lambda_{k-1} + lambda_{k+1} = b_k lambda_k`; quadratic resolutions only.
    pub fn cycle(&self) -> Option<&[BigInt]> {
        self.cycle.as_deref()
    }

    /// Self-intersection numbers `-b_k` of the boundary curves.
    pub fn self_intersections(&self) -> Option<Vec<BigInt>> {
        self.cycle.as_ref().map(|c| c.iter().map(|b| -b.clone()).collect())
    }

    /// All cones of the period including faces, without repetition.
    pub fn all_cones(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = Vec::new();
        for c in &self.cones {
            for face in c.faces() {
                if !out.iter().any(|o| same_generators(o, &face)) {
                    out.push(face);
                }
            }
        }
        out
    }

    pub fn check(&self) -> FanCheck {
        let mut problems = Vec::new();
        let mut smooth = true;
        let mut primitive = true;
        for (k, c) in self.cones.iter().enumerate() {
            match is_smooth(c, &self.lattice) {
                Ok(true) => {}
                Ok(false) => {
                    smooth = false;
                    problems.push(format!("cone {k} is not unimodular"));
                }
                Err(e) => {
                    smooth = false;
                    problems.push(format!("cone {k}: {e}"));
                }
            }
            if !c.is_primitive_in(&self.lattice).unwrap_or(false) {
                primitive = false;
                problems.push(format!("cone {k} has a non-primitive generator"));
            }
        }
        let quadratic = self.lattice.field().degree() == 2;
        let tiles_period = quadratic.then(|| self.tiles_quadratic_period(&mut problems));
        let invariant = self.cycle.as_ref().map(|_| {
            let ok = self.unit_invariance();
            if !ok {
                problems.push("unit action does not reproduce the adjacent periods".into());
            }
            ok
        });
        let cycle_consistent = self.cycle.as_ref().map(|_| {
            let ok = self.cycle_relation_holds();
            if !ok {
                problems.push("cycle relation fails".into());
            }
            ok
        });
        FanCheck { smooth, primitive, invariant, tiles_period, cycle_consistent, problems }
    }

    /// The top cones of a quadratic fan, ordered by their first ray, meet
    /// along consecutive rays, and the last ends at `eps^{-1}` times the first ray.
    fn tiles_quadratic_period(&self, problems: &mut Vec<String>) -> bool {
        let unit = &self.units[0];
        let mut oriented: Vec<(FieldElement, FieldElement)> = Vec::new();
        for c in &self.cones {
            let (x, y) = (c.generators[0].clone(), c.generators[1].clone());
            match orientation(&x, &y) {
                Ordering::Greater => oriented.push((x, y)),
                Ordering::Less => oriented.push((y, x)),
                Ordering::Equal => {
                    problems.push("degenerate cone".into());
                    return false;
                }
            }
        }
        // Start at the cone whose first ray no other cone ends at.
        let start = oriented.iter().position(|(a, _)| !oriented.iter().any(|(_, b)| b == a));
        let Some(mut cur) = start else {
            problems.push("cones close up without a unit shift".into());
            return false;
        };
        let first = oriented[cur].0.clone();
        let mut used = vec![false; oriented.len()];
        for step in 0..oriented.len() {
            used[cur] = true;
            let end = oriented[cur].1.clone();
            if step + 1 == oriented.len() {
                let inv = unit.inverse().expect("unit");
                let shift = if end == &first * &inv {
                    true
                } else {
                    end == &first * unit
                };
                if !shift || used.iter().any(|u| !u) {
                    problems.push("cones do not cover one unit period".into());
                    return false;
                }
                return true;
            }
            match oriented.iter().position(|(a, _)| a == &end) {
                Some(next) if !used[next] => cur = next,
                _ => {
                    problems.push("cones do not form a chain".into());
                    return false;
                }
            }
        }
        false
    }

    /// The greedy boundary walk continued past both ends of the period
    /// agrees with the unit translates of the stored rays.
    pub fn unit_invariance(&self) -> bool {
        let r = self.rays.len();
        if r == 0 || self.lattice.field().degree() != 2 {
            return false;
        }
        let unit = &self.units[0];
        let inv = unit.inverse().expect("unit");
        let shifted_down: Vec<FieldElement> = self.rays.iter().map(|x| x * &inv).collect();
        let shifted_up: Vec<FieldElement> = self.rays.iter().map(|x| x * unit).collect();
        // Forward: from (lambda_{r-1}, lambda_r) produce lambda_{r+1}, ..., lambda_{2r}.
        let (mut prev, mut cur) = (self.rays[r - 1].clone(), shifted_down[0].clone());
        for k in 1..=r {
            let (_, next) = hull_step(&prev, &cur, 0);
            let expected = if k < r { &shifted_down[k] } else { &(&shifted_down[0] * &inv) };
            if &next != expected {
                return false;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        // Backward: from (lambda_0, lambda_{-1}) produce lambda_{-2}, ..., lambda_{-r-1}.
        let (mut prev, mut cur) = (self.rays[0].clone(), shifted_up[r - 1].clone());
        for k in 1..=r {
            let (_, next) = hull_step(&prev, &cur, 1);
            let expected = if k < r { &shifted_up[r - 1 - k] } else { &(&shifted_up[r - 1] * unit) };
            if &next != expected {
                return false;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        true
    }

    /// `lambda_{k-1} + lambda_{k+1} = b_k lambda_k` exactly, `b_k >= 2`.
    pub fn cycle_relation_holds(&self) -> bool {
        let Some(cycle) = &self.cycle else { return false };
        let r = self.rays.len();
        if cycle.len() != r || r == 0 {
            return false;
        }
        let unit = &self.units[0];
        let inv = unit.inverse().expect("unit");
        let ray = |k: isize| -> FieldElement {
            if k < 0 {
                &self.rays[(k + r as isize) as usize] * unit
            } else if k as usize >= r {
                &self.rays[k as usize - r] * &inv
            } else {
                self.rays[k as usize].clone()
            }
        };
        (0..r).all(|k| {
            let k = k as isize;
            let b = &cycle[k as usize];
            *b >= BigInt::from(2)
                && ray(k - 1) + ray(k + 1) == ray(k).scale(&BigRational::from_integer(b.clone()))
        })
    }

    pub fn to_json(&self) -> Result<FanJson> {
        let cones = self
            .cones
            .iter()
            .map(|c| {
                c.coordinates(&self.lattice)?
                    .into_iter()
                    .map(|v| v.iter().map(|x| x.to_i64().ok_or_else(|| Error::InvalidInput("coordinate overflow".into()))).collect())
                    .collect::<Result<Vec<Vec<i64>>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cycle = match &self.cycle {
            Some(c) => Some(
                c.iter()
                    .map(|b| b.to_i64().ok_or_else(|| Error::InvalidInput("cycle entry overflow".into())))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(FanJson {
            lattice: IdealSpec::from_ideal(&self.lattice),
            units: self.units.iter().map(element_to_spec).collect(),
            cones,
            cycle,
        })
    }
}

fn same_generators(a: &Cone, b: &Cone) -> bool {
    a.generators.len() == b.generators.len() && a.generators.iter().all(|g| b.generators.contains(g))
}

/// Exchange format: cones as integer coordinates over the lattice's HNF basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub lattice: IdealSpec,
    pub units: Vec<ElementSpec>,
    pub cones: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<i64>>,
}

impl FanJson {
    /// Rebuilds the fan; a stored cycle is kept so that it gets checked.
    pub fn build(&self, field: &TotallyRealField) -> Result<Fan> {
        let lattice = self.lattice.build(field)?;
        let basis = lattice.basis();
        let units = self.units.iter().map(|u| element_from_spec(field, u)).collect::<Result<Vec<_>>>()?;
        let cones = self
            .cones
            .iter()
            .map(|c| {
                let gens = c
                    .iter()
                    .map(|v| {
                        if v.len() != basis.len() {
                            return Err(Error::InvalidInput("coordinate vector of wrong length".into()));
                        }
                        Ok(v.iter().zip(&basis).fold(field.zero(), |acc, (k, b)| acc + b.scale(&BigRational::from_integer((*k).into()))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Cone::new(gens)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut fan = Fan::from_cones(lattice, units, cones)?;
        if let Some(cycle) = &self.cycle {
            fan.cycle = Some(cycle.iter().map(|&b| BigInt::from(b)).collect());
            fan.rays = fan.cones.iter().map(|c| c.generators[0].clone()).collect();
        }
        Ok(fan)
    }
}

/// The lattice point of least trace in the positive cone; among ties the
/// one with larger first embedding. It is a vertex of the boundary polygon.
fn least_trace_point(lattice: &FractionalIdeal) -> Result<FieldElement> {
    let f = lattice.field();
    let basis = lattice.basis();
    let reduced = reduce_basis(f, &basis, &[1.0, 1.0]);
    let m = f.from_rational(&lattice.min_integer());
    let mut candidates = vec![m];
    for x in [
        reduced[0].clone(),
        reduced[1].clone(),
        &reduced[0] + &reduced[1],
        &reduced[0] - &reduced[1],
    ] {
        for y in [x.clone(), -x] {
            if f.is_totally_positive(&y) {
                candidates.push(y);
            }
        }
    }
    let bound = candidates.iter().map(|c| c.trace()).min().expect("nonempty");
    let mut best: Option<FieldElement> = None;
    for x in enumerate_box(f, &basis, &[bound.clone(), bound.clone()], DEFAULT_BOX_CAP)? {
        if !f.is_totally_positive(&x) {
            continue;
        }
        best = match best {
            None => Some(x),
            Some(b) => match x.trace().cmp(&b.trace()) {
                Ordering::Less => Some(x),
                Ordering::Equal if f.cmp_at(&x, &b, 0) == Ordering::Greater => Some(x),
                _ => Some(b),
            },
        };
    }
    Ok(best.expect("the lattice meets the positive cone"))
}

/// The cusp resolution of a quadratic lattice: the lattice points on the
/// boundary of the convex hull of its nonzero points in the positive cone,
/// over one period of the totally positive unit.
pub fn cusp_resolution_fan(lattice: &FractionalIdeal, unit: &FieldElement) -> Result<Fan> {
    let f = lattice.field();
    if f.degree() != 2 {
        return Err(Error::UnsupportedDegree {
            degree: f.degree(),
            reason: "resolution fans are generated only for quadratic fields; supply and validate a fan instead",
        });
    }
    check_lattice_unit(lattice, unit)?;
    let unit = if f.cmp_at(unit, &f.one(), 0) == Ordering::Less { unit.inverse().expect("unit") } else { unit.clone() };
    let inv = unit.inverse().expect("unit");

    let a0 = least_trace_point(lattice)?;
    let c = lattice.coordinates(&a0).expect("lattice point");
    let eg = c[0].extended_gcd(&c[1]);
    if !eg.gcd.is_one() {
        return Err(Error::Precondition("boundary vertex is not primitive".into()));
    }
    // (c0, c1) . (x, y) = 1, so (-y, x) completes a basis.
    let basis = lattice.basis();
    let mut w = basis[1].scale(&BigRational::from_integer(eg.x.clone())) - basis[0].scale(&BigRational::from_integer(eg.y.clone()));
    if orientation(&a0, &w) == Ordering::Less {
        w = -w;
    }
    let k = f.floor_ratio_at(&(-w.clone()), &a0, 0) + 1;
    let a1 = w + a0.scale(&BigRational::from_integer(k));

    let target = &a0 * &inv;
    let mut rays = vec![a0.clone()];
    let mut cycle = vec![BigInt::zero()];
    let (mut prev, mut cur) = (a0.clone(), a1);
    while cur != target {
        if rays.len() >= MAX_PERIOD {
            return Err(Error::Precondition(format!("no period within {MAX_PERIOD} rays")));
        }
        if orientation(&target, &cur) == Ordering::Greater {
            return Err(Error::InvalidFan("boundary walk passed the unit translate".into()));
        }
        rays.push(cur.clone());
        let (b, next) = hull_step(&prev, &cur, 0);
        cycle.push(b);
        prev = std::mem::replace(&mut cur, next);
    }
    // b_0 from lambda_{-1} + lambda_1 = b_0 lambda_0.
    let before = &rays[rays.len() - 1] * &unit;
    let after = if rays.len() > 1 { rays[1].clone() } else { target.clone() };
    let b0 = (before + after) * a0.inverse().expect("nonzero");
    if !b0.coords().iter().skip(1).all(Zero::is_zero) || !b0.is_integral() || !f.basis_element(0).is_one() {
        return Err(Error::Precondition("cycle relation at the first ray is not integral".into()));
    }
    cycle[0] = b0.coords()[0].to_integer();

    let r = rays.len();
    let cones = (0..r)
        .map(|k| {
            let next = if k + 1 < r { rays[k + 1].clone() } else { target.clone() };
            Cone { generators: vec![rays[k].clone(), next] }
        })
        .collect();
    Ok(Fan { lattice: lattice.clone(), units: vec![unit], cones, rays, cycle: Some(cycle) })
}

/// Exact normalized norm of the weight of a cone, with
/// `Nm_*^{1/n} / (2 pi)` enclosed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LelongNumber {
    #[serde(serialize_with = "ser_rational")]
    pub normalized_norm: BigRational,
    pub degree: usize,
    pub value: Interval,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn check_cone_in(cone: &Cone, lattice: &StabilizerLattice) -> Result<()> {
    if cone.field() != lattice.lattice.field() {
        return Err(Error::InvalidInput("cone and lattice live in different fields".into()));
    }
    cone.coordinates(&lattice.lattice).map(|_| ())
}

/// Lelong number of `-N_*^{1/n}` along the stratum of a cone.
pub fn lelong_number(cone: &Cone, lattice: &StabilizerLattice) -> Result<LelongNumber> {
    check_cone_in(cone, lattice)?;
    let nm = lattice.normalized_norm(&cone.weight());
    let n = cone.field().degree();
    let value = Interval::from_rational(&nm).root(n as u32) / Interval::two_pi();
    Ok(LelongNumber { normalized_norm: nm, degree: n, value })
}

/// `Nm_*(sum_j m_j lambda_j)`, exactly.
pub fn weighted_multiplicity(orders: &[BigInt], cone: &Cone, lattice: &StabilizerLattice) -> Result<BigRational> {
    check_cone_in(cone, lattice)?;
    if orders.len() != cone.dimension() {
        return Err(Error::InvalidInput(format!("{} orders for {} generators", orders.len(), cone.dimension())));
    }
    if orders.iter().any(|m| m < &BigInt::one()) {
        return Err(Error::InvalidInput("vanishing orders must be positive".into()));
    }
    Ok(lattice.normalized_norm(&cone.weighted_sum(orders)))
}

/// `(n / (2 pi l)) (t Nm)^{1/n}`.
pub fn nef_coefficient(degree: usize, depth: Interval, normalized_norm: &BigRational, overlap: u32) -> Interval {
    let n = Interval::exact(degree as f64);
    let scale = n / (Interval::two_pi() * Interval::exact(f64::from(overlap)));
    scale * (depth * Interval::from_rational(normalized_norm)).root(degree as u32)
}

/// One cusp's input to [`nef_divisor_coefficients`].
pub struct CuspBoundary<'a> {
    pub fan: &'a Fan,
    pub lattice: &'a StabilizerLattice,
    pub depth: Interval,
    /// Upper bound on admissible depths; checked when present.
    pub depth_bound: Option<Interval>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RayCoefficient {
    pub ray: Vec<String>,
    pub normalized_norm: String,
    pub coefficient: Interval,
    pub self_intersection: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryDivisorData {
    pub depth: Interval,
    pub overlap: u32,
    pub rays: Vec<RayCoefficient>,
    /// `(n / (2 pi l)) t^{1/n}`, a lower bound for every ray coefficient.
    pub uniform_coefficient: Interval,
}

/// Boundary coefficients of `(K + D) - sum_rho c_rho D_rho`, one block per cusp.
pub fn nef_divisor_coefficients(cusps: &[CuspBoundary<'_>], overlap: u32, degree: usize) -> Result<Vec<BoundaryDivisorData>> {
    if overlap == 0 {
        return Err(Error::InvalidInput("overlap multiplicity must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(cusps.len());
    for c in cusps {
        if c.lattice.lattice.field().degree() != degree {
            return Err(Error::InvalidInput("degree does not match the lattice".into()));
        }
        if !c.depth.is_positive() {
            return Err(Error::Precondition("depth must be positive".into()));
        }
        if let Some(bound) = &c.depth_bound {
            if c.depth.certainly_gt(bound) {
                return Err(Error::Precondition(format!(
                    "depth {} exceeds the canonical bound {}",
                    c.depth.mid(),
                    bound.mid()
                )));
            }
        }
        let selfint = c.fan.self_intersections();
        let rays = c
            .fan
            .rays()
            .iter()
            .enumerate()
            .map(|(k, ray)| {
                let nm = c.lattice.normalized_norm(ray);
                RayCoefficient {
                    ray: ray.coords_strings(),
                    normalized_norm: format_rational(&nm),
                    coefficient: nef_coefficient(degree, c.depth, &nm, overlap),
                    self_intersection: selfint.as_ref().and_then(|s| s[k].to_i64()),
                }
            })
            .collect();
        out.push(BoundaryDivisorData {
            depth: c.depth,
            overlap,
            rays,
            uniform_coefficient: nef_coefficient(degree, c.depth, &BigRational::one(), overlap),
        });
    }
    Ok(out)
}

/// `prod_j sum_{i : x_i = 0} a_i^{(j)}`: the value of the liminf of
/// `prod_j log|z|^{a^{(j)}} / log^n |z - x|` at a point `x` whose vanishing
/// coordinates are flagged.
pub fn stratum_liminf(exponents: &[Vec<f64>], vanishing: &[bool]) -> f64 {
    exponents
        .iter()
        .map(|a| a.iter().zip(vanishing).filter(|(_, &v)| v).map(|(x, _)| *x).sum::<f64>())
        .product()
}

/// Radial estimate of the same liminf: the smallest ratio over the given
/// directions at the smallest radius of a log-spaced sequence. Radii are
/// handled through their logarithms, so they can go far below `f64::MIN_POSITIVE`.
pub fn radial_liminf_estimate(exponents: &[Vec<f64>], point: &[f64], directions: &[Vec<f64>], log_radii: &[f64]) -> f64 {
    let n = exponents.len();
    let mut best = f64::INFINITY;
    for v in directions {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let Some(&t) = log_radii.iter().min_by(|a, b| a.total_cmp(b)) else { continue };
        // log|z_i| for z = x + e^t v / |v|.
        let logs: Vec<f64> = point
            .iter()
            .zip(v)
            .map(|(&x, &vi)| {
                let step = vi / norm;
                if x == 0.0 {
                    t + step.abs().ln()
                } else {
                    (x + step * t.exp()).abs().ln()
                }
            })
            .collect();
        let num: f64 = exponents.iter().map(|a| a.iter().zip(&logs).map(|(ai, l)| ai * l).sum::<f64>()).product();
        let ratio = num / t.powi(n as i32);
        if ratio < best {
            best = ratio;
        }
    }
    best
}

/// Lelong number `(1/2pi) (liminf)^{1/n}` from a liminf value.
pub fn lelong_from_liminf(liminf: f64, degree: usize) -> f64 {
    liminf.powf(1.0 / degree as f64) / std::f64::consts::TAU
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusps::normalized_norm_form;
    use crate::numberfield::unit_group;
    use crate::rational::int;

    fn eps(f: &TotallyRealField) -> FieldElement {
        unit_group(f).unwrap().totally_positive[0].clone()
    }

    fn cycle_i64(fan: &Fan) -> Vec<i64> {
        fan.cycle().unwrap().iter().map(|b| b.to_i64().unwrap()).collect()
    }

    /// Oracle: period of the minus continued fraction `w -> 1 / (ceil(w) - w)`
    /// of the integral-basis generator, computed in the field.
    fn minus_cf_period(f: &TotallyRealField) -> Vec<i64> {
        let one = f.one();
        let mut w = f.basis_element(1);
        let mut seen: Vec<FieldElement> = Vec::new();
        let mut digits: Vec<i64> = Vec::new();
        loop {
            if let Some(p) = seen.iter().position(|s| s == &w) {
                return digits[p..].to_vec();
            }
            seen.push(w.clone());
            let b: BigInt = f.floor_ratio_at(&w, &one, 0) + 1;
            digits.push(b.to_i64().unwrap());
            w = (f.from_rational(&BigRational::from_integer(b)) - w).inverse().unwrap();
        }
    }

    fn is_rotation(a: &[i64], b: &[i64]) -> bool {
        a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|i| a[(i + s) % a.len()] == b[i]))
    }

    /// Oracle: lattice points on the lower-left convex hull boundary of all
    /// totally positive points in a box, found by a monotone chain with
    /// exact orientation tests.
    fn hull_boundary(lattice: &FractionalIdeal, bound: &BigRational) -> Vec<FieldElement> {
        let f = lattice.field();
        let mut pts: Vec<FieldElement> = enumerate_box(f, &lattice.basis(), &[bound.clone(), bound.clone()], DEFAULT_BOX_CAP)
            .unwrap()
            .into_iter()
            .filter(|x| f.is_totally_positive(x))
            .collect();
        pts.sort_by(|x, y| f.cmp_at(x, y, 0).then(f.cmp_at(x, y, 1)));
        let mut hull: Vec<FieldElement> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let a = &hull[hull.len() - 2];
                let b = &hull[hull.len() - 1];
                // Pop on a clockwise turn; collinear points stay.
                if orientation(&(b - a), &(&p - a)) == Ordering::Less {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull
    }

    #[test]
    fn smoothness_examples() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let o = FractionalIdeal::unit(&f);
        let one = f.one();
        let e = eps(&f);
        assert!(is_smooth(&Cone::new(vec![one.clone(), e.clone()]).unwrap(), &o).unwrap());
        let skew = e.scale(&int(2)) + one.clone();
        assert!(!is_smooth(&Cone::new(vec![one.clone(), skew]).unwrap(), &o).unwrap());
        let c = Cone::new(vec![e.clone(), e.scale(&int(2))]).unwrap();
        assert!(matches!(is_smooth(&c, &o), Err(Error::NotFullDimensional { generators: 2, rank: 1 })));
    }

    #[test]
    fn lattice_basis_cone_has_unit_determinant() {
        // {1, 1 + w} with w = (1 + sqrt5)/2 are both totally positive.
        let f = TotallyRealField::quadratic(5).unwrap();
        let o = FractionalIdeal::unit(&f);
        let c = Cone::new(vec![f.one(), f.element_from_ints(&[1, 1])]).unwrap();
        assert!(is_smooth(&c, &o).unwrap());
        let c = Cone::new(vec![f.one(), f.element_from_ints(&[3, 2])]).unwrap();
        assert!(!is_smooth(&c, &o).unwrap());
    }

    #[test]
    fn cycles_match_minus_continued_fractions() {
        for d in [2, 3, 5, 6, 7, 10, 13, 14, 17, 21, 29] {
            let f = TotallyRealField::quadratic(d).unwrap();
            let fan = cusp_resolution_fan(&FractionalIdeal::unit(&f), &eps(&f)).unwrap();
            let check = fan.check();
            assert!(check.passed(), "d = {d}: {check:?}");
            let oracle = minus_cf_period(&f);
            let cycle = cycle_i64(&fan);
            // The fan runs over one period of eps+, the oracle over the
            // shortest period; the former repeats the latter.
            assert_eq!(cycle.len() % oracle.len(), 0, "d = {d}");
            let reps = cycle.len() / oracle.len();
            let repeated: Vec<i64> = oracle.iter().cycle().take(oracle.len() * reps).copied().collect();
            assert!(is_rotation(&cycle, &repeated), "d = {d}: {cycle:?} vs {oracle:?}");
        }
    }

    #[test]
    fn known_cycles() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let fan = cusp_resolution_fan(&FractionalIdeal::unit(&f), &eps(&f)).unwrap();
        assert_eq!(cycle_i64(&fan), vec![3]);
        let f = TotallyRealField::quadratic(2).unwrap();
        let fan = cusp_resolution_fan(&FractionalIdeal::unit(&f), &eps(&f)).unwrap();
        let mut c = cycle_i64(&fan);
        c.sort();
        assert_eq!(c, vec![2, 4]);
    }

    #[test]
    fn rays_match_convex_hull_oracle() {
        for d in [2, 3, 5, 13, 10] {
            let f = TotallyRealField::quadratic(d).unwrap();
            let ideals = [
                FractionalIdeal::unit(&f),
                FractionalIdeal::from_generators(&f, &[f.from_int(3), f.element_from_ints(&[1, 1])]).unwrap(),
                FractionalIdeal::from_int(&f, 2).unwrap(),
            ];
            let e = eps(&f);
            for lattice in ideals {
                let fan = cusp_resolution_fan(&lattice, &e).unwrap();
                assert!(fan.check().passed());
                let inv = e.inverse().unwrap();
                let last = fan.rays().last().unwrap();
                let second = fan.rays().get(1).cloned().unwrap_or_else(|| &fan.rays()[0] * &inv);
                let window: Vec<FieldElement> = std::iter::once(last * &e)
                    .chain(fan.rays().iter().cloned())
                    .chain([&fan.rays()[0] * &inv, &second * &inv])
                    .collect();
                let big = window
                    .iter()
                    .flat_map(|x| x.to_f64())
                    .fold(0.0f64, f64::max);
                let bound = BigRational::from_float(2.0 * big + 1.0).unwrap();
                let hull = hull_boundary(&lattice, &bound);
                // Hull points between lambda_0 and eps^{-1} lambda_0 inclusive.
                let start = &fan.rays()[0];
                let end = start * &inv;
                let inside: Vec<FieldElement> = hull
                    .into_iter()
                    .filter(|p| orientation(start, p) != Ordering::Less && orientation(p, &end) != Ordering::Less)
                    .collect();
                let mut expected: Vec<FieldElement> = fan.rays().to_vec();
                expected.push(end);
                // The hull is traversed by increasing first embedding, the
                // rays by decreasing ratio.
                expected.reverse();
                assert_eq!(inside, expected, "d = {d}");
            }
        }
    }

    #[test]
    fn non_quadratic_is_unsupported() {
        let c: Vec<BigInt> = [1, -3, 0, 1].iter().map(|&x| x.into()).collect();
        let basis = linalg::to_rat(&linalg::identity_int(3));
        let f = TotallyRealField::new(&c, Some(basis)).unwrap();
        let o = FractionalIdeal::unit(&f);
        assert!(matches!(cusp_resolution_fan(&o, &f.one()), Err(Error::UnsupportedDegree { degree: 3, .. })));
    }

    #[test]
    fn invariance_detects_a_wrong_unit() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let o = FractionalIdeal::unit(&f);
        assert!(cusp_resolution_fan(&o, &f.from_int(2)).is_err());
        let e = eps(&f);
        // A non-minimal unit gives a longer but still valid period.
        let fan = cusp_resolution_fan(&o, &e.pow(2)).unwrap();
        assert!(fan.check().passed());
        assert_eq!(cycle_i64(&fan), vec![3, 3]);
    }

    #[test]
    fn json_round_trip_and_user_fans() {
        let f = TotallyRealField::quadratic(3).unwrap();
        let o = FractionalIdeal::unit(&f);
        let fan = cusp_resolution_fan(&o, &eps(&f)).unwrap();
        let json = serde_json::to_string(&fan.to_json().unwrap()).unwrap();
        let back: FanJson = serde_json::from_str(&json).unwrap();
        let rebuilt = back.build(&f).unwrap();
        assert!(rebuilt.check().passed());

        let mut corrupted: FanJson = serde_json::from_str(&json).unwrap();
        corrupted.cones[0][1] = vec![corrupted.cones[0][1][0] * 3, corrupted.cones[0][1][1] * 3];
        let bad = corrupted.build(&f).unwrap();
        assert!(!bad.check().passed());
    }

    #[test]
    fn lelong_examples() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let lat = normalized_norm_form(&FractionalIdeal::unit(&f)).unwrap();
        let ray = Cone::new(vec![f.one()]).unwrap();
        let nu = lelong_number(&ray, &lat).unwrap();
        assert_eq!(nu.normalized_norm, int(1));
        assert!(nu.value.contains(1.0 / std::f64::consts::TAU));
        assert!((nu.value.mid() - 0.15915).abs() < 1e-5);

        let fan = cusp_resolution_fan(&lat.lattice, &eps(&f)).unwrap();
        for cone in fan.cones() {
            let top = lelong_number(cone, &lat).unwrap();
            for face in cone.faces().iter().take(2) {
                let lower = lelong_number(face, &lat).unwrap();
                assert!(top.normalized_norm > lower.normalized_norm);
            }
            let rev = Cone::new(cone.generators().iter().rev().cloned().collect()).unwrap();
            assert_eq!(lelong_number(&rev, &lat).unwrap(), top);
        }
    }

    #[test]
    fn surface_formulas() {
        let a = [0.7, 1.9];
        let b = [2.3, 0.4];
        let ex = vec![a.to_vec(), b.to_vec()];
        let origin = stratum_liminf(&ex, &[true, true]);
        assert!((origin.sqrt() - ((a[0] + a[1]) * (b[0] + b[1])).sqrt()).abs() < 1e-12);
        let off = stratum_liminf(&ex, &[true, false]);
        assert!((off.sqrt() - (a[0] * b[0]).sqrt()).abs() < 1e-12);
        let dirs: Vec<Vec<f64>> = (0..16).map(|k| {
            let t = 0.1 + k as f64 * 0.09;
            vec![t.cos(), t.sin()]
        }).collect();
        let radii: Vec<f64> = (1..=40).map(|k| -(k as f64) * 15.0).collect();
        let est = radial_liminf_estimate(&ex, &[0.0, 0.0], &dirs, &radii);
        assert!((est / origin - 1.0).abs() < 0.05);
        let est = radial_liminf_estimate(&ex, &[0.0, 0.5], &dirs, &radii);
        assert!((est / off - 1.0).abs() < 0.05);
    }

    #[test]
    fn weighted_multiplicity_examples() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let lat = normalized_norm_form(&FractionalIdeal::unit(&f)).unwrap();
        let e = eps(&f);
        let cone = Cone::new(vec![f.one(), e.clone()]).unwrap();
        let one = BigInt::one();
        assert_eq!(weighted_multiplicity(&[one.clone(), one.clone()], &cone, &lat).unwrap(), lelong_number(&cone, &lat).unwrap().normalized_norm);
        let m = weighted_multiplicity(&[BigInt::from(2), one.clone()], &cone, &lat).unwrap();
        assert!(m >= int(4) + int(1));
        let ray = Cone::new(vec![e]).unwrap();
        assert_eq!(weighted_multiplicity(&[BigInt::from(3)], &ray, &lat).unwrap(), int(9));
        assert!(weighted_multiplicity(&[BigInt::zero()], &ray, &lat).is_err());
    }

    #[test]
    fn nef_coefficients() {
        let pi = std::f64::consts::PI;
        let c = nef_coefficient(2, Interval::exact(1.0), &int(1), 1);
        assert!(c.contains(1.0 / pi));
        let half = nef_coefficient(2, Interval::exact(1.0), &int(1), 2);
        assert!((half.mid() * 2.0 - c.mid()).abs() < 1e-14);
        let t = Interval::from_rational(&int(10_000)).sqrt();
        assert!((nef_coefficient(2, t, &int(1), 1).mid() - 10.0 / pi).abs() < 1e-12);

        let f = TotallyRealField::quadratic(5).unwrap();
        let lat = normalized_norm_form(&FractionalIdeal::unit(&f)).unwrap();
        let fan = cusp_resolution_fan(&lat.lattice, &eps(&f)).unwrap();
        let data = nef_divisor_coefficients(
            &[CuspBoundary { fan: &fan, lattice: &lat, depth: Interval::exact(1.0), depth_bound: Some(Interval::exact(1.0)) }],
            1,
            2,
        )
        .unwrap();
        assert_eq!(data[0].rays.len(), 1);
        assert_eq!(data[0].rays[0].self_intersection, Some(-3));
        assert!(data[0].rays[0].coefficient.contains(1.0 / pi));
        let too_deep = nef_divisor_coefficients(
            &[CuspBoundary { fan: &fan, lattice: &lat, depth: Interval::exact(2.0), depth_bound: Some(Interval::exact(1.0)) }],
            1,
            2,
        );
        assert!(matches!(too_deep, Err(Error::Precondition(_))));
    }
}
