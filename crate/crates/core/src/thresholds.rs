//! Closed-form level-norm thresholds and the boundary slope coefficient.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use crate::cusps::CoverVariant;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::format_rational;

/// `coefficient * pi^power`, kept symbolic so equalities are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple {
    pub coefficient: BigRational,
    pub pi_power: u32,
}

impl PiMultiple {
    /// `(q * 2 pi)^k`.
    fn two_pi_times(q: &BigRational, k: u32) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        PiMultiple { coefficient: Pow::pow(&(q * two), k), pi_power: k }
    }

    pub fn value(&self) -> Interval {
        Interval::from_rational(&self.coefficient) * Interval::pi().powi(self.pi_power)
    }

    /// `value > q`, certified; `None` when the enclosure straddles `q`.
    pub fn exceeded_by(&self, q: &BigRational) -> Option<bool> {
        let v = self.value();
        let x = Interval::from_rational(q);
        if x.certainly_gt(&v) {
            Some(true)
        } else if x.hi <= v.lo {
            Some(false)
        } else {
            None
        }
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", format_rational(&self.coefficient)),
            1 => write!(f, "{} pi", format_rational(&self.coefficient)),
            k => write!(f, "{} pi^{k}", format_rational(&self.coefficient)),
        }
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    Ok(())
}

/// `(2 pi lambda / n)^{2n}`: above it `K - (lambda - 1) D` is ample modulo the boundary.
pub fn ample_threshold(n: u32, lambda: &BigRational) -> Result<PiMultiple> {
    check_n(n)?;
    if lambda.is_negative() {
        return Err(Error::InvalidInput("lambda must be nonnegative".into()));
    }
    Ok(PiMultiple::two_pi_times(&(lambda / BigRational::from_integer(n.into())), 2 * n))
}

/// `(2 pi)^{2n}`.
pub fn green_griffiths_threshold(n: u32) -> Result<PiMultiple> {
    check_n(n)?;
    Ok(PiMultiple::two_pi_times(&BigRational::one(), 2 * n))
}

/// `(2 pi / n)^{2n}`.
pub fn general_type_threshold(n: u32) -> Result<PiMultiple> {
    check_n(n)?;
    Ok(PiMultiple::two_pi_times(&BigRational::new(BigInt::one(), n.into()), 2 * n))
}

/// `(2 pi)^4` for torsion covers, `(2 pi)^2` for principal covers (surfaces).
pub fn minimal_model_threshold(variant: CoverVariant) -> PiMultiple {
    let k = match variant {
        CoverVariant::Torsion => 4,
        CoverVariant::Principal => 2,
    };
    PiMultiple::two_pi_times(&BigRational::one(), k)
}

/// `4^n`.
pub fn elliptic_free_threshold(n: u32) -> Result<BigInt> {
    check_n(n)?;
    Ok(Pow::pow(BigInt::from(4), n))
}

/// `1 - (n / 2 pi) Nm^{1/2n}` (torsion) or `1 - (n / 2 pi) Nm^{1/n}` (principal).
pub fn nef_slope_coefficient(n: u32, norm: &BigRational, variant: CoverVariant) -> Result<Interval> {
    check_n(n)?;
    if !norm.is_positive() {
        return Err(Error::InvalidInput("level norm must be positive".into()));
    }
    let root = match variant {
        CoverVariant::Torsion => 2 * n,
        CoverVariant::Principal => n,
    };
    let scale = Interval::exact(f64::from(n)) / Interval::two_pi();
    Ok(Interval::exact(1.0) - scale * Interval::from_rational(norm).root(root))
}

/// Level norm at which the slope coefficient vanishes.
pub fn nef_slope_zero(n: u32, variant: CoverVariant) -> Result<PiMultiple> {
    check_n(n)?;
    let k = match variant {
        CoverVariant::Torsion => 2 * n,
        CoverVariant::Principal => n,
    };
    Ok(PiMultiple::two_pi_times(&BigRational::new(BigInt::one(), n.into()), k))
}

/// Inputs echoed in every report.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdInputs {
    pub n: u32,
    pub norm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<CoverVariant>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub name: String,
    pub formula: String,
    /// The divisor or property the threshold is about.
    pub statement: String,
    pub inputs: ThresholdInputs,
    /// Exact form, when the value is a rational multiple of a power of pi.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub value: Interval,
    /// `Some(true)` only when certified; `None` when undecided.
    pub satisfied: Option<bool>,
}

/// Every threshold at once, with flags for a level of the given norm.
pub fn evaluate_level(n: u32, norm: &BigRational, lambda: Option<&BigRational>) -> Result<Vec<ThresholdReport>> {
    check_n(n)?;
    if !norm.is_positive() {
        return Err(Error::InvalidInput("level norm must be positive".into()));
    }
    let one = BigRational::one();
    let lambda = lambda.unwrap_or(&one);
    let inputs = |variant: Option<CoverVariant>, lam: Option<&BigRational>| ThresholdInputs {
        n,
        norm: format_rational(norm),
        lambda: lam.map(format_rational),
        variant,
    };
    let symbolic = |name: &str, formula: &str, statement: String, value: PiMultiple, inp: ThresholdInputs| ThresholdReport {
        name: name.into(),
        formula: formula.into(),
        statement,
        inputs: inp,
        exact: Some(value.to_string()),
        value: value.value(),
        satisfied: value.exceeded_by(norm),
    };
    let lam_text = format_rational(&(lambda - &one));
    let mut out = vec![
        symbolic(
            "ample",
            "(2 pi lambda / n)^(2n)",
            format!("K - ({lam_text}) D ample modulo the boundary"),
            ample_threshold(n, lambda)?,
            inputs(None, Some(lambda)),
        ),
        symbolic(
            "green_griffiths",
            "(2 pi)^(2n)",
            "entire curves lie in the boundary".into(),
            green_griffiths_threshold(n)?,
            inputs(None, None),
        ),
        symbolic(
            "general_type",
            "(2 pi / n)^(2n)",
            "general type (no elliptic points assumed)".into(),
            general_type_threshold(n)?,
            inputs(None, None),
        ),
    ];
    if n == 2 {
        for variant in [CoverVariant::Torsion, CoverVariant::Principal] {
            let formula = match variant {
                CoverVariant::Torsion => "(2 pi)^4",
                CoverVariant::Principal => "(2 pi)^2",
            };
            out.push(symbolic(
                &format!("minimal_model_{}", variant_name(variant)),
                formula,
                "the open surface is minimal".into(),
                minimal_model_threshold(variant),
                inputs(Some(variant), None),
            ));
        }
    }
    let ell = elliptic_free_threshold(n)?;
    out.push(ThresholdReport {
        name: "elliptic_free".into(),
        formula: "4^n".into(),
        statement: "no elliptic points".into(),
        inputs: inputs(None, None),
        exact: Some(ell.to_string()),
        value: Interval::from_int(&ell),
        satisfied: Some(norm > &BigRational::from_integer(ell)),
    });
    for variant in [CoverVariant::Torsion, CoverVariant::Principal] {
        let coeff = nef_slope_coefficient(n, norm, variant)?;
        let formula = match variant {
            CoverVariant::Torsion => "1 - (n / 2 pi) Nm^(1/2n)",
            CoverVariant::Principal => "1 - (n / 2 pi) Nm^(1/n)",
        };
        out.push(ThresholdReport {
            name: format!("nef_slope_{}", variant_name(variant)),
            formula: formula.into(),
            statement: "boundary coefficient of the nef divisor K + (coefficient) D; satisfied when negative".into(),
            inputs: inputs(Some(variant), None),
            exact: None,
            value: coeff,
            satisfied: if coeff.is_negative() {
                Some(true)
            } else if coeff.lo >= 0.0 {
                Some(false)
            } else {
                None
            },
        });
    }
    Ok(out)
}

fn variant_name(v: CoverVariant) -> &'static str {
    match v {
        CoverVariant::Torsion => "torsion",
        CoverVariant::Principal => "principal",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ample_examples() {
        let v = ample_threshold(2, &int(1)).unwrap();
        assert_eq!(v, PiMultiple { coefficient: int(1), pi_power: 4 });
        assert_relative_eq!(v.value().mid(), PI.powi(4), max_relative = 1e-12);
        assert_relative_eq!(v.value().mid(), 97.409, epsilon = 1e-3);
        assert_relative_eq!(ample_threshold(2, &int(2)).unwrap().value().mid(), 1558.545, epsilon = 1e-3);
        assert!(ample_threshold(2, &rat(1, 1_000_000)).unwrap().value().mid() < 1e-20);
    }

    #[test]
    fn other_thresholds() {
        assert_relative_eq!(green_griffiths_threshold(2).unwrap().value().mid(), 1558.545, epsilon = 1e-3);
        assert_relative_eq!(green_griffiths_threshold(1).unwrap().value().mid(), 39.478, epsilon = 1e-3);
        for n in 1..6 {
            assert!(green_griffiths_threshold(n + 1).unwrap().value().lo > green_griffiths_threshold(n).unwrap().value().hi);
            assert_eq!(ample_threshold(n, &int(1)).unwrap(), general_type_threshold(n).unwrap());
            assert_eq!(green_griffiths_threshold(n).unwrap(), ample_threshold(n, &int(n as i64)).unwrap());
        }
        assert_eq!(general_type_threshold(2).unwrap().value().mid(), ample_threshold(2, &int(1)).unwrap().value().mid());
        let six = general_type_threshold(6).unwrap().value();
        assert_relative_eq!(six.mid(), (PI / 3.0).powi(12), max_relative = 1e-12);
        assert!(six.hi < 2.0);
        assert!(general_type_threshold(7).unwrap().value().hi < 1.0);
        let t = minimal_model_threshold(CoverVariant::Torsion).value();
        let p = minimal_model_threshold(CoverVariant::Principal).value();
        assert_relative_eq!(t.mid(), 1558.545, epsilon = 1e-3);
        assert_relative_eq!(p.mid(), 39.478, epsilon = 1e-3);
        assert_relative_eq!(t.mid() / p.mid(), (2.0 * PI).powi(2), max_relative = 1e-12);
        assert_eq!(elliptic_free_threshold(1).unwrap(), BigInt::from(4));
        assert_eq!(elliptic_free_threshold(2).unwrap(), BigInt::from(16));
        assert_eq!(elliptic_free_threshold(3).unwrap(), BigInt::from(64));
    }

    #[test]
    fn slope_coefficient() {
        let c = nef_slope_coefficient(2, &int(1_000_000), CoverVariant::Torsion).unwrap();
        assert_relative_eq!(c.mid(), 1.0 - 10f64.powf(1.5) / PI, max_relative = 1e-12);
        assert_relative_eq!(c.mid(), -9.066, epsilon = 1e-3);
        for n in 1..=8 {
            let zero = nef_slope_zero(n, CoverVariant::Torsion).unwrap();
            assert_eq!(zero, ample_threshold(n, &int(1)).unwrap());
            let at = BigRational::from_float(zero.value().mid()).unwrap();
            assert!(nef_slope_coefficient(n, &at, CoverVariant::Torsion).unwrap().mid().abs() < 1e-10);
            let pz = nef_slope_zero(n, CoverVariant::Principal).unwrap();
            let at = BigRational::from_float(pz.value().mid()).unwrap();
            assert!(nef_slope_coefficient(n, &at, CoverVariant::Principal).unwrap().mid().abs() < 1e-10);
        }
        let a = nef_slope_coefficient(3, &int(50), CoverVariant::Torsion).unwrap();
        let b = nef_slope_coefficient(3, &int(51), CoverVariant::Torsion).unwrap();
        assert!(b.certainly_lt(&a));
    }

    #[test]
    fn level_reports() {
        let find = |r: &[ThresholdReport], name: &str| r.iter().find(|x| x.name == name).unwrap().satisfied;
        let r = evaluate_level(2, &int(2000), None).unwrap();
        assert_eq!(find(&r, "green_griffiths"), Some(true));
        let r = evaluate_level(2, &int(100), Some(&int(1))).unwrap();
        assert_eq!(find(&r, "ample"), Some(true));
        let r = evaluate_level(2, &int(10), None).unwrap();
        assert_eq!(find(&r, "elliptic_free"), Some(false));
        assert_eq!(find(&r, "green_griffiths"), Some(false));
        for rep in &r {
            assert!(rep.value.width() <= 1e-12 * rep.value.mag().max(1e-300) || rep.value.width() == 0.0, "{}", rep.name);
        }
        assert_eq!(find(&evaluate_level(2, &int(16), None).unwrap(), "elliptic_free"), Some(false));
        assert_eq!(find(&evaluate_level(2, &int(17), None).unwrap(), "elliptic_free"), Some(true));
    }
}
