//! Volumes of holomorphic test curves inside horoball neighborhoods.
//!
//! A test curve is a holomorphic map `z -> (w_1(z), ..., w_n(z))` from the
//! upper half plane, periodic under `z -> z + T`. The pullback of
//! `sum_j dx_j ^ dy_j / y_j^2` is `sum_j |w_j'|^2 / (Im w_j)^2 dx dy`, and
//! the volume is taken over one period of the region `N(w(z)) > 1/s`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `coefficient * exp(2 pi i order z / T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QTerm {
    pub order: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    /// `z -> (c_1 z, ..., c_n z)`.
    LinearGeodesic { scales: Vec<f64> },
    /// `w_j(z) = c_j z + sum_k a_{jk} q^{k}`, `q = exp(2 pi i z / T)`.
    QSeries { scales: Vec<f64>, terms: Vec<Vec<QTerm>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestCurve {
    pub name: String,
    #[serde(flatten)]
    pub kind: CurveKind,
    pub period: f64,
    /// Initial number of sample columns per period.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    16
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub error: f64,
}

impl TestCurve {
    pub fn linear_geodesic(name: &str, scales: Vec<f64>, period: f64) -> Self {
        TestCurve { name: name.into(), kind: CurveKind::LinearGeodesic { scales }, period, resolution: default_resolution() }
    }

    pub fn dim(&self) -> usize {
        self.scales().len()
    }

    fn scales(&self) -> &[f64] {
        match &self.kind {
            CurveKind::LinearGeodesic { scales } | CurveKind::QSeries { scales, .. } => scales,
        }
    }

    pub fn is_linear_geodesic(&self) -> bool {
        matches!(self.kind, CurveKind::LinearGeodesic { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let scales = self.scales();
        if scales.is_empty() {
            return Err(Error::InvalidInput(format!("curve {}: no coordinates", self.name)));
        }
        if scales.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
            return Err(Error::InvalidInput(format!("curve {}: scales must be positive", self.name)));
        }
        if !(self.period > 0.0) || !self.period.is_finite() {
            return Err(Error::InvalidInput(format!("curve {}: period must be positive", self.name)));
        }
        if self.resolution < 2 {
            return Err(Error::InvalidInput(format!("curve {}: resolution below 2", self.name)));
        }
        if let CurveKind::QSeries { terms, .. } = &self.kind {
            if terms.len() != scales.len() {
                return Err(Error::InvalidInput(format!("curve {}: one term list per coordinate", self.name)));
            }
            if terms.iter().flatten().any(|t| t.order == 0) {
                return Err(Error::InvalidInput(format!("curve {}: q-series orders start at 1", self.name)));
            }
        }
        Ok(())
    }

    /// Values and derivatives of the coordinate functions at `z`.
    fn eval(&self, z: Complex64) -> Vec<(Complex64, Complex64)> {
        match &self.kind {
            CurveKind::LinearGeodesic { scales } => scales.iter().map(|&c| (z * c, Complex64::new(c, 0.0))).collect(),
            CurveKind::QSeries { scales, terms } => scales
                .iter()
                .zip(terms)
                .map(|(&c, ts)| {
                    let mut w = z * c;
                    let mut dw = Complex64::new(c, 0.0);
                    for t in ts {
                        let k = Complex64::new(0.0, TAU * f64::from(t.order) / self.period);
                        let e = (k * z).exp() * Complex64::new(t.re, t.im);
                        w += e;
                        dw += e * k;
                    }
                    (w, dw)
                })
                .collect(),
        }
    }

    /// `N(w(x + iy))`, or `None` when some coordinate leaves the half plane.
    fn height_at(&self, x: f64, y: f64) -> Option<f64> {
        let mut n = 1.0;
        for (w, _) in self.eval(Complex64::new(x, y)) {
            if !(w.im > 0.0) {
                return None;
            }
            n *= w.im;
        }
        Some(n)
    }

    /// Area density of the pulled-back form in the variable `u = 1/y`.
    fn density_in_u(&self, x: f64, u: f64) -> f64 {
        if u == 0.0 {
            // As y -> infinity every coordinate behaves like c_j z.
            return self.dim() as f64;
        }
        let y = 1.0 / u;
        self.eval(Complex64::new(x, y))
            .iter()
            .map(|(w, dw)| dw.norm_sqr() / (w.im * w.im))
            .sum::<f64>()
            * y
            * y
    }

    /// Lowest `y` above which `N > 1/s` along the vertical line at `x`.
    /// Assumes a single crossing on that line.
    fn crossing(&self, x: f64, s: f64) -> Result<f64> {
        let target = 1.0 / s;
        let above = |y: f64| self.height_at(x, y).is_some_and(|n| n > target);
        let mut hi = 1.0;
        while !above(hi) {
            hi *= 2.0;
            if hi > 1e150 {
                return Err(Error::Precondition(format!("curve {} never enters the horoball", self.name)));
            }
        }
        let mut lo = hi / 2.0;
        while above(lo) {
            lo /= 2.0;
            if lo < 1e-150 {
                return Err(Error::Precondition(format!("curve {} stays in the horoball", self.name)));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if above(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Romberg integration of `f` on `[0, b]` to relative tolerance `tol`.
fn romberg(f: impl Fn(f64) -> f64, b: f64, tol: f64) -> (f64, f64) {
    const MAX_LEVEL: usize = 20;
    let mut prev_row: Vec<f64> = vec![0.5 * b * (f(0.0) + f(b))];
    let mut intervals = 1usize;
    for level in 1..MAX_LEVEL {
        let h = b / (2 * intervals) as f64;
        let mids: f64 = (0..intervals).map(|k| f((2 * k + 1) as f64 * h)).sum();
        let mut row = vec![0.5 * prev_row[0] + h * mids];
        for j in 1..=level {
            let factor = 4f64.powi(j as i32);
            let r = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0);
            row.push(r);
        }
        intervals *= 2;
        let err = (row[level] - prev_row[level - 1]).abs();
        if level >= 3 && err <= tol * row[level].abs().max(1e-300) {
            return (row[level], err);
        }
        prev_row = row;
    }
    let last = prev_row.len() - 1;
    (prev_row[last], (prev_row[last] - prev_row[last.saturating_sub(1)]).abs())
}

/// Volume of one period of the curve inside `N > 1/s`, by the trapezoid
/// rule in `x` (refined by doubling; the integrand is periodic) and Romberg
/// integration in `u = 1/y`.
pub fn curve_volume_in_horoball(curve: &TestCurve, s: f64) -> Result<VolumeEstimate> {
    curve.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidInput(format!("depth {s} must be positive")));
    }
    const TOL: f64 = 1e-12;
    let column = |x: f64| -> Result<(f64, f64)> {
        let y0 = curve.crossing(x, s)?;
        Ok(romberg(|u| curve.density_in_u(x, u), 1.0 / y0, TOL))
    };
    let t = curve.period;
    let mut m = curve.resolution;
    let mut samples: Vec<(f64, f64)> = (0..m).map(|k| column(k as f64 * t / m as f64)).collect::<Result<_>>()?;
    let estimate = |v: &[(f64, f64)]| -> (f64, f64) {
        let n = v.len() as f64;
        (v.iter().map(|p| p.0).sum::<f64>() * t / n, v.iter().map(|p| p.1).sum::<f64>() * t / n)
    };
    let mut value = estimate(&samples).0;
    loop {
        let fresh: Vec<(f64, f64)> = (0..m).map(|k| column((k as f64 + 0.5) * t / m as f64)).collect::<Result<_>>()?;
        let mut merged = Vec::with_capacity(2 * m);
        for (a, b) in samples.iter().zip(&fresh) {
            merged.push(*a);
            merged.push(*b);
        }
        let (next, inner_err) = estimate(&merged);
        let diff = (next - value).abs();
        value = next;
        samples = merged;
        m *= 2;
        if diff <= TOL * value.abs() || m >= 1 << 14 {
            return Ok(VolumeEstimate { value, error: diff + inner_err });
        }
    }
}

/// `(s, s^{-1/n} vol(s))` for each depth.
pub fn normalized_volume_profile(curve: &TestCurve, depths: &[f64]) -> Result<Vec<(f64, VolumeEstimate)>> {
    let n = curve.dim() as f64;
    depths
        .iter()
        .map(|&s| {
            let v = curve_volume_in_horoball(curve, s)?;
            let k = s.powf(-1.0 / n);
            Ok((s, VolumeEstimate { value: v.value * k, error: v.error * k }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn log_spaced(lo: f64, hi: f64, k: usize) -> Vec<f64> {
        (0..k).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (k - 1) as f64).exp()).collect()
    }

    #[test]
    fn geodesic_closed_form() {
        // vol = n T (s prod c)^{1/n}.
        for (scales, t) in [(vec![1.0, 1.0], 1.0), (vec![2.0, 0.5], 3.0), (vec![1.0, 3.0, 0.7], 0.5)] {
            let n = scales.len() as f64;
            let prod: f64 = scales.iter().product();
            let curve = TestCurve::linear_geodesic("g", scales.clone(), t);
            for s in [0.1, 1.0, 4.0, 10.0] {
                let v = curve_volume_in_horoball(&curve, s).unwrap();
                assert_relative_eq!(v.value, n * t * (s * prod).powf(1.0 / n), max_relative = 1e-10);
            }
        }
        let v = curve_volume_in_horoball(&TestCurve::linear_geodesic("g", vec![1.0, 1.0], 3.0), 4.0).unwrap();
        assert_relative_eq!(v.value, 12.0, max_relative = 1e-10);
    }

    #[test]
    fn q_series_curve_grows() {
        let curve = TestCurve {
            name: "q".into(),
            kind: CurveKind::QSeries {
                scales: vec![1.0, 1.0],
                terms: vec![vec![], vec![QTerm { order: 1, re: 0.3, im: 0.0 }]],
            },
            period: 1.0,
            resolution: 16,
        };
        let profile = normalized_volume_profile(&curve, &log_spaced(0.1, 10.0, 12)).unwrap();
        for w in profile.windows(2) {
            assert!(w[1].1.value > w[0].1.value - 1e-9, "{w:?}");
        }
        assert!(profile.last().unwrap().1.value > profile[0].1.value + 1e-6);
    }

    #[test]
    fn json_format() {
        let s = r#"{"name":"q","kind":"q_series","scales":[1,1],"terms":[[],[{"order":1,"re":0.3,"im":0}]],"period":1}"#;
        let c: TestCurve = serde_json::from_str(s).unwrap();
        assert!(c.validate().is_ok());
        assert_eq!(c.resolution, 16);
        let bad = r#"{"name":"g","kind":"linear_geodesic","scales":[1,0],"period":1}"#;
        let c: TestCurve = serde_json::from_str(bad).unwrap();
        assert!(c.validate().is_err());
    }
}
