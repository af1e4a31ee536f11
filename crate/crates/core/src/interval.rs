//! Closed `f64` intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp in each direction, which is
//! enough for the correctly rounded IEEE operations. The transcendental
//! functions from `libm` are not correctly rounded, so they are widened by
//! [`TRANSCENDENTAL_ULPS`] instead.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

const TRANSCENDENTAL_ULPS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, ulps: u32) -> f64 {
    let mut v = x;
    for _ in 0..ulps {
        v = v.next_down();
    }
    v
}

fn up(x: f64, ulps: u32) -> f64 {
    let mut v = x;
    for _ in 0..ulps {
        v = v.next_up();
    }
    v
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Degenerate interval for a value that is exactly representable.
    pub fn exact(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Encloses a double that is only approximately known (one ulp either side).
    pub fn around(x: f64) -> Self {
        Interval { lo: x.next_down(), hi: x.next_up() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let (lo, hi) = rational_to_f64_bounds(q);
        Interval { lo, hi }
    }

    pub fn from_int(k: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(k.clone()))
    }

    pub fn pi() -> Self {
        Interval::around(std::f64::consts::PI)
    }

    pub fn two_pi() -> Self {
        Interval::around(std::f64::consts::TAU)
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn hull(&self, other: &Interval) -> Self {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.hi >= 0.0, "sqrt of negative interval");
        let lo = if self.lo <= 0.0 { 0.0 } else { down(self.lo.sqrt(), 1).max(0.0) };
        Interval { lo, hi: up(self.hi.sqrt(), 1) }
    }

    pub fn ln(&self) -> Self {
        assert!(self.lo > 0.0, "log of non-positive interval");
        Interval {
            lo: down(self.lo.ln(), TRANSCENDENTAL_ULPS),
            hi: up(self.hi.ln(), TRANSCENDENTAL_ULPS),
        }
    }

    pub fn exp(&self) -> Self {
        Interval {
            lo: down(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0),
            hi: up(self.hi.exp(), TRANSCENDENTAL_ULPS),
        }
    }

    pub fn sinh(&self) -> Self {
        Interval {
            lo: down(self.lo.sinh(), TRANSCENDENTAL_ULPS),
            hi: up(self.hi.sinh(), TRANSCENDENTAL_ULPS),
        }
    }

    /// `self^k` for an integer exponent.
    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Interval::exact(1.0);
        for _ in 0..k {
            acc = acc * *self;
        }
        acc
    }

    /// Real power `self^p` for a positive base.
    pub fn powf(&self, p: Interval) -> Self {
        (self.ln() * p).exp()
    }

    /// `self^(1/k)` for a non-negative base.
    pub fn root(&self, k: u32) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return *self;
        }
        if k == 2 {
            return self.sqrt();
        }
        assert!(self.hi >= 0.0, "root of negative interval");
        let inv = Interval::exact(1.0) / Interval::exact(k as f64);
        let lo = if self.lo <= 0.0 { 0.0 } else { Interval::exact(self.lo).powf(inv).lo };
        let hi = if self.hi == 0.0 { 0.0 } else { Interval::exact(self.hi).powf(inv).hi };
        Interval { lo, hi }
    }

    /// Certified `self > other`.
    pub fn certainly_gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    /// Certified `self < other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo, 1), hi: up(self.hi + o.hi, 1) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi, 1), hi: up(self.hi - o.lo, 1) }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(!o.contains_zero(), "division by interval containing zero");
        let p = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo, 1), hi: up(hi, 1) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

/// Bounds `lo <= q <= hi` with `lo`, `hi` adjacent or equal doubles.
pub fn rational_to_f64_bounds(q: &BigRational) -> (f64, f64) {
    if q.is_zero() {
        return (0.0, 0.0);
    }
    let approx = q.to_f64().unwrap_or(if q.is_positive() { f64::MAX } else { f64::MIN });
    if !approx.is_finite() {
        return if q.is_positive() { (f64::MAX, f64::INFINITY) } else { (f64::NEG_INFINITY, f64::MIN) };
    }
    // Snap to an exact comparison with the rational value.
    let exact = BigRational::from_float(approx).expect("finite double");
    match exact.cmp(q) {
        std::cmp::Ordering::Equal => (approx, approx),
        std::cmp::Ordering::Less => (approx, approx.next_up()),
        std::cmp::Ordering::Greater => (approx.next_down(), approx),
    }
}
