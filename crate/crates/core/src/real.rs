//! Double-double arithmetic and the real-number inputs used by the
//! generators and the continued-fraction code.
//!
//! A [`DoubleDouble`] is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand. Only the handful of operations the
//! crate needs are provided.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Exact product `a*b = p + e` using a fused multiply-add.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact conversion for any `u64`.
    pub fn from_u64(n: u64) -> Self {
        let hi = n as f64;
        // `hi` may round up past u64::MAX only for n near 2^64; the i128
        // difference stays exact either way.
        let lo = (n as i128 - hi as i128) as f64;
        Self::new(hi, lo)
    }

    pub fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Self::new(hi, lo)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div(self, other: Self) -> Self {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }.add(DoubleDouble::from_f64(q3))
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            // hi is integral, the fractional information lives in lo
            let fl = self.lo.floor();
            Self::new(fh, fl)
        } else {
            Self { hi: fh, lo: 0.0 }
        }
    }

    /// Fractional part `self - floor(self)`, rounded to the nearest `f64`
    /// and folded into `[0, 1)`.
    pub fn fract_f64(self) -> f64 {
        let ip = self.floor();
        let r = self.sub(ip).to_f64();
        fold_unit(r)
    }

    /// Distance to the nearest integer, evaluated before rounding to `f64`.
    pub fn torus_norm(self) -> f64 {
        let ip = self.floor();
        let r = self.sub(ip);
        let r1 = DoubleDouble::from_f64(1.0).sub(r);
        r.to_f64().min(r1.to_f64()).abs()
    }
}

#[inline]
pub(crate) fn fold_unit(mut r: f64) -> f64 {
    if r < 0.0 {
        r += 1.0;
    }
    if r >= 1.0 {
        r -= 1.0;
    }
    r
}

/// Built-in high-precision constants, usable by name in sequence specs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constant {
    GoldenMean,
    Sqrt2,
    Sqrt3,
    Sqrt5,
    Pi,
    E,
}

impl Constant {
    pub const ALL: [Constant; 6] = [
        Constant::GoldenMean,
        Constant::Sqrt2,
        Constant::Sqrt3,
        Constant::Sqrt5,
        Constant::Pi,
        Constant::E,
    ];

    pub fn value(self) -> DoubleDouble {
        let (hi, lo) = match self {
            Constant::GoldenMean => (1.618033988749895, -5.432115203682506e-17),
            Constant::Sqrt2 => (std::f64::consts::SQRT_2, -9.667293313452913e-17),
            Constant::Sqrt3 => (1.7320508075688772, 1.0035084221806903e-16),
            Constant::Sqrt5 => (2.23606797749979, -1.0864230407365012e-16),
            Constant::Pi => (std::f64::consts::PI, 1.2246467991473532e-16),
            Constant::E => (std::f64::consts::E, 1.4456468917292502e-16),
        };
        DoubleDouble { hi, lo }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::GoldenMean => "phi",
            Constant::Sqrt2 => "sqrt2",
            Constant::Sqrt3 => "sqrt3",
            Constant::Sqrt5 => "sqrt5",
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn real(self) -> Real {
        Real::from_dd(self.value(), DD_RELATIVE_ERROR * self.value().hi.abs())
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relative accuracy of the stored double-double constants.
const DD_RELATIVE_ERROR: f64 = 4.0e-32;

/// A real number known to within an absolute `uncertainty`.
///
/// `from_f64` treats the binary value as the half-ulp rounding of some real,
/// so digits that depend on bits beyond the `f64` significand are never
/// reported by [`crate::continued_fractions::cf_expand`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Real {
    value: DoubleDouble,
    uncertainty: f64,
}

impl Real {
    pub fn from_f64(x: f64) -> Self {
        Self {
            value: DoubleDouble::from_f64(x),
            uncertainty: x.abs() * f64::EPSILON * 0.5,
        }
    }

    /// The binary value of `x`, taken as exact.
    pub fn exact(x: f64) -> Self {
        Self {
            value: DoubleDouble::from_f64(x),
            uncertainty: 0.0,
        }
    }

    pub fn from_dd(value: DoubleDouble, uncertainty: f64) -> Self {
        Self { value, uncertainty }
    }

    pub fn golden_mean() -> Self {
        Constant::GoldenMean.real()
    }

    pub fn sqrt2() -> Self {
        Constant::Sqrt2.real()
    }

    pub fn value(&self) -> DoubleDouble {
        self.value
    }

    pub fn uncertainty(&self) -> f64 {
        self.uncertainty
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.value.is_finite() && self.uncertainty.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(self.value.hi))
        }
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::from_f64(x)
    }
}

impl From<Constant> for Real {
    fn from(c: Constant) -> Self {
        c.real()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_satisfies_its_quadratic() {
        // phi^2 - phi - 1 = 0
        let phi = Constant::GoldenMean.value();
        let r = phi.mul(phi).sub(phi).sub(DoubleDouble::from_f64(1.0));
        assert!(r.to_f64().abs() < 1e-30, "{r:?}");
    }

    #[test]
    fn square_roots_square_back() {
        for (c, n) in [(Constant::Sqrt2, 2.0), (Constant::Sqrt3, 3.0), (Constant::Sqrt5, 5.0)] {
            let v = c.value();
            let r = v.mul(v).sub(DoubleDouble::from_f64(n));
            assert!(r.to_f64().abs() < 1e-30, "{c}: {r:?}");
        }
    }

    #[test]
    fn fract_of_large_multiple_keeps_precision() {
        // {10^6 * sqrt2} computed from the exact digits of sqrt2
        // 1414213.5623730950488016887...
        let x = Constant::Sqrt2.value().mul_f64(1.0e6).fract_f64();
        assert!((x - 0.562_373_095_048_801_7).abs() < 1e-15);
    }

    #[test]
    fn floor_handles_integral_hi_with_negative_lo() {
        let x = DoubleDouble::new(3.0, -1e-20);
        assert_eq!(x.floor().to_f64(), 2.0);
        // 1 - 1e-20 rounds to 1.0, which wraps to 0 on the circle
        assert_eq!(x.fract_f64(), 0.0);
        assert!(x.torus_norm() < 1e-19);
    }

    #[test]
    fn from_u64_is_exact() {
        let n = (1u64 << 60) + 12345;
        let d = DoubleDouble::from_u64(n);
        assert_eq!(d.hi as i128 + d.lo as i128, n as i128);
    }

    #[test]
    fn constant_names_round_trip() {
        for c in Constant::ALL {
            assert_eq!(Constant::from_name(c.name()), Some(c));
        }
    }
}
