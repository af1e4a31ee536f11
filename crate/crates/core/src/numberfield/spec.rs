//! Serializable descriptions of fields, elements and ideals.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::{FieldElement, TotallyRealField};
use super::ideal::FractionalIdeal;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

/// A rational written either as a JSON integer or as a string `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatValue {
    Int(i64),
    Str(String),
}

impl RatValue {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RatValue::Int(k) => Ok(BigRational::from_integer(BigInt::from(*k))),
            RatValue::Str(s) => parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("not a rational: {s:?}"))),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        RatValue::Str(format_rational(q))
    }
}

fn to_rationals(v: &[RatValue]) -> Result<Vec<BigRational>> {
    v.iter().map(RatValue::to_rational).collect()
}

fn to_integers(v: &[RatValue]) -> Result<Vec<BigInt>> {
    to_rationals(v)?
        .into_iter()
        .map(|q| {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(Error::InvalidInput("polynomial coefficients must be integers".into()))
            }
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSpec {
    /// Fundamental units in integral-basis coordinates.
    #[serde(default)]
    pub fundamental: Vec<Vec<RatValue>>,
    /// Optional generators of the totally positive units.
    #[serde(default)]
    pub totally_positive: Vec<Vec<RatValue>>,
}

/// `{"min_poly": [-5, 0, 1], "integral_basis": [[1, 0], ["1/2", "1/2"]], "units": {...}}`.
///
/// `min_poly` lists coefficients from the constant term up. Basis rows are
/// power-basis coordinates; unit coordinates are over the integral basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub min_poly: Vec<RatValue>,
    #[serde(default)]
    pub integral_basis: Option<Vec<Vec<RatValue>>>,
    #[serde(default)]
    pub units: Option<UnitsSpec>,
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Self {
        FieldSpec {
            min_poly: vec![RatValue::Int(-d), RatValue::Int(0), RatValue::Int(1)],
            integral_basis: None,
            units: None,
        }
    }

    pub fn build(&self) -> Result<TotallyRealField> {
        let poly = to_integers(&self.min_poly)?;
        let basis = match &self.integral_basis {
            Some(rows) => Some(rows.iter().map(|r| to_rationals(r)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        let field = TotallyRealField::new(&poly, basis)?;
        match &self.units {
            Some(u) if !u.fundamental.is_empty() || !u.totally_positive.is_empty() => {
                let fundamental = u.fundamental.iter().map(|r| to_rationals(r)).collect::<Result<Vec<_>>>()?;
                let positive = u.totally_positive.iter().map(|r| to_rationals(r)).collect::<Result<Vec<_>>>()?;
                field.with_units(fundamental, positive)
            }
            _ => Ok(field),
        }
    }

    /// Parses `"sqrt:5"`, `"5"` (a squarefree integer) or inline JSON.
    pub fn parse_shorthand(s: &str) -> Result<Self> {
        let t = s.trim();
        let d = t.strip_prefix("sqrt:").or_else(|| t.strip_prefix("Q(sqrt").and_then(|r| r.strip_suffix(')')));
        if let Some(d) = d {
            return d
                .trim()
                .parse::<i64>()
                .map(FieldSpec::quadratic)
                .map_err(|_| Error::InvalidInput(format!("bad field shorthand {s:?}")));
        }
        if let Ok(d) = t.parse::<i64>() {
            return Ok(FieldSpec::quadratic(d));
        }
        serde_json::from_str(t).map_err(|e| Error::InvalidInput(format!("bad field description: {e}")))
    }
}

/// A field element as coordinates over the integral basis.
pub type ElementSpec = Vec<RatValue>;

pub fn element_from_spec(field: &TotallyRealField, spec: &[RatValue]) -> Result<FieldElement> {
    field.element(to_rationals(spec)?)
}

pub fn element_to_spec(x: &FieldElement) -> ElementSpec {
    x.coords().iter().map(RatValue::from_rational).collect()
}

/// An ideal: an integer `k` for `(k)`, a generator list, or an explicit Z-basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    Int(i64),
    Generators { generators: Vec<ElementSpec> },
    Basis { basis: Vec<ElementSpec> },
}

impl IdealSpec {
    pub fn build(&self, field: &TotallyRealField) -> Result<FractionalIdeal> {
        match self {
            IdealSpec::Int(k) => FractionalIdeal::from_int(field, *k),
            IdealSpec::Generators { generators } => {
                let gens = generators.iter().map(|g| element_from_spec(field, g)).collect::<Result<Vec<_>>>()?;
                FractionalIdeal::from_generators(field, &gens)
            }
            IdealSpec::Basis { basis } => {
                let rows = basis.iter().map(|r| to_rationals(r)).collect::<Result<Vec<_>>>()?;
                FractionalIdeal::from_basis(field, &rows)
            }
        }
    }

    pub fn from_ideal(ideal: &FractionalIdeal) -> Self {
        IdealSpec::Basis { basis: ideal.basis().iter().map(element_to_spec).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn parses_documented_format() {
        let s = r#"{"min_poly":[-5,0,1],"integral_basis":[[1,0],["1/2","1/2"]]}"#;
        let spec: FieldSpec = serde_json::from_str(s).unwrap();
        let f = spec.build().unwrap();
        assert_eq!(f.discriminant(), BigInt::from(5));
        let g = FieldSpec::parse_shorthand("sqrt:5").unwrap().build().unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn units_are_validated() {
        let s = r#"{"min_poly":[-2,0,1],"units":{"fundamental":[[1,1]]}}"#;
        assert!(FieldSpec::parse_shorthand(s).unwrap().build().is_ok());
        let bad = r#"{"min_poly":[-2,0,1],"units":{"fundamental":[[2,1]]}}"#;
        assert!(matches!(FieldSpec::parse_shorthand(bad).unwrap().build(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn ideal_specs() {
        let f = TotallyRealField::quadratic(5).unwrap();
        let two = IdealSpec::Int(2).build(&f).unwrap();
        assert_eq!(two.norm(), int(4));
        let g: IdealSpec = serde_json::from_str(r#"{"generators":[[-1,2]]}"#).unwrap();
        assert_eq!(g.build(&f).unwrap().norm(), int(5));
        let back = IdealSpec::from_ideal(&two).build(&f).unwrap();
        assert_eq!(back, two);
    }
}
