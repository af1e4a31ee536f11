//! Numerics on products of upper half planes.

mod bounds;
mod volume;

pub use bounds::{
    boundary_multiplicity_bound, gonality_rh_bound, interior_volume_bound, psh_hessian, schwarz_genus_bound,
    ss_injectivity_bound, MultiplicityVerdict, PshHessian,
};
pub use volume::{curve_volume_in_horoball, normalized_volume_profile, CurveKind, QTerm, TestCurve, VolumeEstimate};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::congruence::GroupElement;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// A point of `H^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    coords: Vec<Complex64>,
}

impl HPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        }
        if let Some(z) = coords.iter().find(|z| !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(format!("{z} is not in the upper half plane")));
        }
        Ok(HPoint { coords })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `N(z) = prod_i Im z_i`.
    pub fn height(&self) -> f64 {
        self.coords.iter().map(|z| z.im).product()
    }

    /// `N(z)` enclosed in an interval.
    pub fn height_interval(&self) -> Interval {
        self.coords.iter().fold(Interval::exact(1.0), |acc, z| acc * Interval::exact(z.im))
    }
}

/// Hyperbolic distance on the upper half plane.
pub fn dist_h(z: Complex64, w: Complex64) -> f64 {
    assert!(z.im > 0.0 && w.im > 0.0, "points must lie in the upper half plane");
    let r = (z - w).norm() / (z - w.conj()).norm();
    2.0 * r.atanh()
}

/// Maximum of the coordinatewise distances.
pub fn dist_hn(z: &HPoint, w: &HPoint) -> f64 {
    assert_eq!(z.dim(), w.dim(), "dimension mismatch");
    z.coords.iter().zip(&w.coords).map(|(a, b)| dist_h(*a, *b)).fold(0.0, f64::max)
}

/// Whether `N(z) > 1/s`. Decided in interval arithmetic when the
/// floating-point comparison is within ten ulps of the boundary.
pub fn horoball_contains(s: f64, z: &HPoint) -> bool {
    assert!(s > 0.0, "depth must be positive");
    let n = z.height();
    let threshold = 1.0 / s;
    if (n - threshold).abs() > 10.0 * f64::EPSILON * threshold {
        return n > threshold;
    }
    let lhs = z.height_interval() * Interval::exact(s);
    lhs.certainly_gt(&Interval::exact(1.0))
}

/// Distance from `z` to `z + a`.
pub fn translation_distance(z: Complex64, a: f64) -> f64 {
    let y = z.im;
    2.0 * (a.abs() / (a * a + 4.0 * y * y).sqrt()).atanh()
}

/// An element of `SL_2(R)^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    factors: Vec<[[f64; 2]; 2]>,
}

impl Isometry {
    pub fn new(factors: Vec<[[f64; 2]; 2]>) -> Result<Self> {
        for m in &factors {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let scale = 1f64.max((m[0][0] * m[1][1]).abs() + (m[0][1] * m[1][0]).abs());
            if (det - 1.0).abs() > 1e-12 * scale {
                return Err(Error::InvalidInput(format!("factor has determinant {det}")));
            }
        }
        Ok(Isometry { factors })
    }

    /// The real embeddings of a group element. The determinant is one exactly.
    pub fn from_group_element(g: &GroupElement) -> Self {
        let [a, b, c, d] = [&g.a, &g.b, &g.c, &g.d].map(|x| x.to_f64());
        let factors = (0..a.len()).map(|i| [[a[i], b[i]], [c[i], d[i]]]).collect();
        Isometry { factors }
    }

    pub fn identity(n: usize) -> Self {
        Isometry { factors: vec![[[1.0, 0.0], [0.0, 1.0]]; n] }
    }

    pub fn factors(&self) -> &[[[f64; 2]; 2]] {
        &self.factors
    }

    pub fn apply(&self, z: &HPoint) -> HPoint {
        assert_eq!(self.factors.len(), z.dim(), "dimension mismatch");
        let coords = self
            .factors
            .iter()
            .zip(&z.coords)
            .map(|(m, &w)| (w * m[0][0] + m[0][1]) / (w * m[1][0] + m[1][1]))
            .map(|w| Complex64::new(w.re, w.im.max(f64::MIN_POSITIVE)))
            .collect();
        HPoint { coords }
    }
}

/// `log |lambda|` for the largest eigenvalue over all factors; each factor
/// must be hyperbolic, parabolic or diagonal.
pub fn semisimple_displacement_bound(g: &Isometry) -> Result<f64> {
    let mut best = 0.0f64;
    for m in &g.factors {
        let t = (m[0][0] + m[1][1]).abs();
        let lambda = if m[0][1] == 0.0 && m[1][0] == 0.0 {
            m[0][0].abs().max(m[1][1].abs())
        } else if t >= 2.0 {
            (t + (t * t - 4.0).sqrt()) / 2.0
        } else {
            return Err(Error::Precondition(format!("factor with trace {t} is elliptic")));
        };
        best = best.max(lambda.ln());
    }
    Ok(best)
}

/// Half the smallest displacement `d(z, g z)` over the sample points.
pub fn sampled_half_displacement(g: &Isometry, points: &[HPoint]) -> f64 {
    points.iter().map(|z| dist_hn(z, &g.apply(z))).fold(f64::INFINITY, f64::min) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn distances() {
        let i = c(0.0, 1.0);
        assert_eq!(dist_h(i, i), 0.0);
        assert_relative_eq!(dist_h(i, c(0.0, 2.0)), 2f64.ln(), epsilon = 1e-14);
        let expected = 2.0 * (1.0 / 5f64.sqrt()).atanh();
        assert_relative_eq!(dist_h(i, c(1.0, 1.0)), expected, epsilon = 1e-14);
        assert_relative_eq!(expected, 0.9624, epsilon = 1e-4);
        assert_relative_eq!(translation_distance(i, 1.0), expected, epsilon = 1e-14);
        let z = HPoint::new(vec![i, i]).unwrap();
        let w = HPoint::new(vec![c(0.0, 2.0), i]).unwrap();
        assert_relative_eq!(dist_hn(&z, &w), 2f64.ln(), epsilon = 1e-14);
        assert_eq!(dist_hn(&z, &w), dist_hn(&w, &z));
    }

    #[test]
    fn translation_asymptotics() {
        assert_eq!(translation_distance(c(0.0, 1.0), 0.0), 0.0);
        for y in [1.0, 3.0, 100.0] {
            for a in [1e-4 * y, 1e-3 * y, 1e-2 * y] {
                let d = translation_distance(c(0.5, y), a);
                assert!((d / (a / y) - 1.0).abs() < 0.01);
                assert_relative_eq!(d, dist_h(c(0.5, y), c(0.5 + a, y)), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn horoballs() {
        let i = c(0.0, 1.0);
        assert!(horoball_contains(2.0, &HPoint::new(vec![i, i]).unwrap()));
        assert!(!horoball_contains(2.0, &HPoint::new(vec![c(0.0, 0.5), c(0.0, 0.5)]).unwrap()));
        assert!(!horoball_contains(1.0, &HPoint::new(vec![i, i]).unwrap()));
        let z = HPoint::new(vec![c(0.3, 0.7), c(-1.0, 2.5)]).unwrap();
        let scale = [1.5f64, 0.4];
        let g = Isometry::new(scale.iter().map(|&a| [[a, 0.0], [0.0, 1.0 / a]]).collect()).unwrap();
        let gz = g.apply(&z);
        assert_relative_eq!(gz.height(), z.height() * scale.iter().map(|a| a * a).product::<f64>(), max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_points_and_matrices() {
        assert!(HPoint::new(vec![c(0.0, -1.0)]).is_err());
        assert!(Isometry::new(vec![[[2.0, 0.0], [0.0, 1.0]]]).is_err());
    }

    #[test]
    fn displacement_bounds() {
        assert_eq!(semisimple_displacement_bound(&Isometry::identity(2)).unwrap(), 0.0);
        let r = 2f64.sqrt();
        let g = Isometry::new(vec![[[r, 0.0], [0.0, 1.0 / r]], [[1.0, 0.0], [0.0, 1.0]]]).unwrap();
        let bound = semisimple_displacement_bound(&g).unwrap();
        assert_relative_eq!(bound, r.ln(), epsilon = 1e-15);
        let axis: Vec<HPoint> = (1..50).map(|k| HPoint::new(vec![c(0.0, k as f64 / 7.0), c(0.0, 1.0)]).unwrap()).collect();
        let sampled = sampled_half_displacement(&g, &axis);
        assert_relative_eq!(sampled, r.ln(), epsilon = 1e-12);

        let h = Isometry::new(vec![[[2.0, 1.0], [1.0, 1.0]]]).unwrap();
        let expected = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert_relative_eq!(semisimple_displacement_bound(&h).unwrap(), expected, epsilon = 1e-14);
        assert_relative_eq!(expected, 0.9624, epsilon = 1e-4);
        let pts: Vec<HPoint> = (0..400)
            .map(|k| HPoint::new(vec![c(-2.0 + k as f64 * 0.01, 0.2 + (k % 37) as f64 * 0.05)]).unwrap())
            .collect();
        assert!(sampled_half_displacement(&h, &pts) >= expected - 1e-12);

        let elliptic = Isometry::new(vec![[[0.0, -1.0], [1.0, 0.0]]]).unwrap();
        assert!(semisimple_displacement_bound(&elliptic).is_err());
    }
}
