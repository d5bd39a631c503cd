//! Continued fractions, convergents and Ostrowski numeration.
//!
//! Expansion runs the Euclidean algorithm on a 120-bit fixed-point image of
//! the input, so partial quotients are exact for the represented value. A
//! digit is kept only while the whole uncertainty interval of the input lies
//! inside the cylinder set of the digits produced so far.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{DoubleDouble, Real};

const FRAC_BITS: u32 = 120;

/// Margin applied to the input uncertainty when deciding whether a digit is
/// determined.
const RELIABILITY_MARGIN: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub p: i64,
    pub q: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The input is rational and its expansion terminated.
    Exact,
    /// The last convergent is within the requested tolerance.
    Tolerance,
    MaxTerms,
    /// The next digit is not determined by the precision of the input.
    Precision,
    /// The next convergent would overflow 64-bit integers.
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CfExpansion {
    value: Real,
    digits: Vec<i64>,
    convergents: Vec<Convergent>,
    termination: Termination,
}

/// Expands `x` into at most `max_terms` partial quotients `a_0; a_1, ...`.
///
/// Stops early once `|x - p_n/q_n| <= tolerance`, or when the next digit is
/// not determined by the precision carried by `x`.
pub fn cf_expand(x: impl Into<Real>, max_terms: usize, tolerance: f64) -> Result<CfExpansion> {
    let x = x.into();
    x.check_finite()?;
    if max_terms == 0 {
        return Err(Error::InvalidArgument("max_terms must be at least 1".into()));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }

    let v = x.value();
    let ip = v.floor();
    if ip.hi.abs() >= 2f64.powi(62) {
        return Err(Error::InvalidArgument(format!(
            "integer part of {} does not fit the 64-bit convergent range",
            v.hi
        )));
    }
    let mut a0 = ip.hi as i64 + ip.lo as i64;
    let frac = v.sub(ip);
    let scale = 2f64.powi(FRAC_BITS as i32);
    let one: i128 = 1 << FRAC_BITS;
    let mut f = (frac.hi * scale).round() as i128 + (frac.lo * scale).round() as i128;
    if f < 0 {
        f += one;
        a0 -= 1;
    } else if f >= one {
        f -= one;
        a0 += 1;
    }
    let uncertainty = x.uncertainty() + 2f64.powi(-(FRAC_BITS as i32));

    let mut digits = vec![a0];
    let mut convergents = vec![Convergent { p: a0, q: 1 }];
    // complete quotient x_{n+1} = num / den
    let mut num = one as u128;
    let mut den = f as u128;

    let termination = loop {
        let n = digits.len() - 1;
        let Convergent { p, q } = convergents[n];
        let (pp, qp) = if n == 0 {
            (1i64, 0u64)
        } else {
            (convergents[n - 1].p, convergents[n - 1].q)
        };
        let qf = q as f64;
        let qpf = qp as f64;

        let residual;
        let dist_to_mediant;
        if den == 0 {
            residual = 0.0;
            dist_to_mediant = 1.0 / (qf * (qf + qpf));
        } else {
            let xq = num as f64 / den as f64;
            residual = 1.0 / (qf * (xq * qf + qpf));
            dist_to_mediant = (xq - 1.0) / ((xq * qf + qpf) * (qf + qpf));
        }

        if residual <= tolerance {
            break if den == 0 {
                Termination::Exact
            } else {
                Termination::Tolerance
            };
        }
        if residual.min(dist_to_mediant) <= RELIABILITY_MARGIN * uncertainty {
            if n > 0 {
                digits.pop();
                convergents.pop();
            }
            break Termination::Precision;
        }
        if digits.len() >= max_terms {
            break Termination::MaxTerms;
        }

        let a = num / den;
        let r = num % den;
        num = den;
        den = r;
        let next = i64::try_from(a).ok().and_then(|a| {
            let pn = a.checked_mul(p)?.checked_add(pp)?;
            let qn = (a as u64).checked_mul(q)?.checked_add(qp)?;
            Some((a, Convergent { p: pn, q: qn }))
        });
        match next {
            Some((a, c)) => {
                digits.push(a);
                convergents.push(c);
            }
            None => break Termination::Overflow,
        }
    };

    Ok(CfExpansion {
        value: x,
        digits,
        convergents,
        termination,
    })
}

/// Convergents of `[a_0; a_1, ..., a_m]` from the second-order recurrence
/// with seeds `p_{-2} = 0, p_{-1} = 1, q_{-2} = 1, q_{-1} = 0`.
pub fn convergents(digits: &[i64]) -> Result<Vec<Convergent>> {
    if digits.is_empty() {
        return Err(Error::InvalidArgument("continued fraction has no digits".into()));
    }
    let (mut p2, mut p1) = (0i64, 1i64);
    let (mut q2, mut q1) = (1u64, 0u64);
    let mut out = Vec::with_capacity(digits.len());
    for (n, &a) in digits.iter().enumerate() {
        if n > 0 && a < 1 {
            return Err(Error::InvalidArgument(format!(
                "partial quotient a_{n} = {a} must be positive"
            )));
        }
        let overflow = || Error::ConvergentOverflow {
            last_safe_index: n.saturating_sub(1),
        };
        let p = a
            .checked_mul(p1)
            .and_then(|v| v.checked_add(p2))
            .ok_or_else(overflow)?;
        let q = if n == 0 {
            1
        } else {
            (a as u64)
                .checked_mul(q1)
                .and_then(|v| v.checked_add(q2))
                .ok_or_else(overflow)?
        };
        out.push(Convergent { p, q });
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
    }
    Ok(out)
}

impl CfExpansion {
    /// Builds an expansion from explicit digits; the value is the last
    /// convergent.
    pub fn from_digits(digits: Vec<i64>) -> Result<Self> {
        let convergents = convergents(&digits)?;
        let last = convergents[convergents.len() - 1];
        let v = DoubleDouble::from_i64(last.p).div(DoubleDouble::from_u64(last.q));
        Ok(Self {
            value: Real::from_dd(v, v.hi.abs() * 1e-31),
            digits,
            convergents,
            termination: Termination::Exact,
        })
    }

    pub fn value(&self) -> Real {
        self.value
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn convergents(&self) -> &[Convergent] {
        &self.convergents
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `a_n` for `n >= 1`.
    pub fn partial_quotient(&self, n: usize) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.digits.get(n).map(|&a| a as u64)
    }

    pub fn q(&self, n: usize) -> Option<u64> {
        self.convergents.get(n).map(|c| c.q)
    }

    pub fn last_convergent(&self) -> Convergent {
        self.convergents[self.convergents.len() - 1]
    }

    /// `|q_k z - p_k|`, with the convention `|q_{-1} z - p_{-1}| = 1`.
    pub fn delta(&self, k: isize) -> f64 {
        if k < 0 {
            return 1.0;
        }
        let c = self.convergents[k as usize];
        self.value
            .value()
            .mul(DoubleDouble::from_u64(c.q))
            .sub(DoubleDouble::from_i64(c.p))
            .abs()
            .to_f64()
    }

    /// `||m z||`, evaluated in double-double precision.
    pub fn torus_norm_of_multiple(&self, m: u64) -> f64 {
        self.value.value().mul(DoubleDouble::from_u64(m)).torus_norm()
    }
}

/// Ostrowski digits of `N` with respect to the denominators `q_k`.
///
/// `digits[k]` multiplies `q_k`, starting at `k = 0`. The admissible digits
/// satisfy `0 <= b_0 < a_1`, `0 <= b_k <= a_{k+1}`, and `b_{k-1} = 0`
/// whenever `b_k = a_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OstrowskiDigits {
    n: u64,
    digits: Vec<u64>,
}

pub fn ostrowski_expand(n: u64, cf: &CfExpansion) -> Result<OstrowskiDigits> {
    if n == 0 {
        return Err(Error::InvalidArgument("Ostrowski expansion needs N >= 1".into()));
    }
    let conv = cf.convergents();
    let largest = conv.iter().map(|c| c.q).max().unwrap_or(0);
    if largest <= n {
        return Err(Error::InsufficientConvergents { needed: n, largest });
    }
    let top = conv
        .iter()
        .rposition(|c| c.q <= n)
        .expect("q_0 = 1 <= N");
    let mut digits = vec![0u64; top + 1];
    let mut rem = n;
    for k in (0..=top).rev() {
        let q = conv[k].q;
        digits[k] = rem / q;
        rem -= digits[k] * q;
    }
    debug_assert_eq!(rem, 0);
    Ok(OstrowskiDigits { n, digits })
}

impl OstrowskiDigits {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Largest index with a non-zero digit.
    pub fn top_index(&self) -> usize {
        self.digits.len() - 1
    }

    pub fn digit(&self, k: isize) -> u64 {
        if k < 0 {
            0
        } else {
            self.digits.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// `sum_k b_k q_k`, in 128 bits so that malformed digits cannot wrap.
    pub fn reconstruct(&self, cf: &CfExpansion) -> u128 {
        self.digits
            .iter()
            .zip(cf.convergents())
            .map(|(&b, c)| b as u128 * c.q as u128)
            .sum()
    }

    /// Checks the reconstruction and the digit constraints against `cf`.
    pub fn validate(&self, cf: &CfExpansion) -> Result<()> {
        if self.digits.len() >= cf.len() {
            return Err(Error::InvalidArgument(
                "digits extend past the stored partial quotients".into(),
            ));
        }
        if self.reconstruct(cf) != self.n as u128 {
            return Err(Error::InvalidArgument(format!(
                "digits reconstruct {} instead of {}",
                self.reconstruct(cf),
                self.n
            )));
        }
        for (k, &b) in self.digits.iter().enumerate() {
            let bound = cf.partial_quotient(k + 1).expect("checked length");
            let bound = if k == 0 { bound - 1 } else { bound };
            if b > bound {
                return Err(Error::InvalidArgument(format!(
                    "digit b_{k} = {b} exceeds its bound {bound}"
                )));
            }
            if k > 0 && b == bound && self.digits[k - 1] != 0 {
                return Err(Error::InvalidArgument(format!(
                    "digit b_{k} is maximal but b_{} = {} is non-zero",
                    k - 1,
                    self.digits[k - 1]
                )));
            }
        }
        Ok(())
    }
}

/// Distance from `x` to the nearest integer.
pub fn torus_norm(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Constant;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn golden_mean_digits_are_all_one() {
        let cf = cf_expand(Real::golden_mean(), 8, 0.0).unwrap();
        assert_eq!(cf.digits(), &[1; 8]);
        assert_eq!(cf.termination(), Termination::MaxTerms);
    }

    #[test]
    fn sqrt2_digits() {
        let cf = cf_expand(Real::sqrt2(), 5, 0.0).unwrap();
        assert_eq!(cf.digits(), &[1, 2, 2, 2, 2]);
    }

    #[test]
    fn golden_mean_denominators_are_fibonacci() {
        let cf = cf_expand(Real::golden_mean(), 7, 0.0).unwrap();
        let qs: Vec<u64> = cf.convergents().iter().map(|c| c.q).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn half_is_zero_two() {
        let c = convergents(&[0, 2]).unwrap();
        assert_eq!(c.last(), Some(&Convergent { p: 1, q: 2 }));
        let cf = cf_expand(0.5, 10, 0.0).unwrap();
        assert_eq!(cf.digits(), &[0, 2]);
        assert_eq!(cf.termination(), Termination::Exact);
    }

    #[test]
    fn sqrt2_four_digits_end_at_17_over_12() {
        let cf = cf_expand(Real::sqrt2(), 4, 0.0).unwrap();
        let last = cf.last_convergent();
        assert_eq!((last.p, last.q), (17, 12));
        let err = (std::f64::consts::SQRT_2 - 17.0 / 12.0).abs();
        assert!(err < 1.0 / 144.0);
    }

    #[test]
    fn integers_and_negative_values() {
        let cf = cf_expand(17.0, 5, 0.0).unwrap();
        assert_eq!(cf.digits(), &[17]);
        let cf = cf_expand(-0.75, 5, 0.0).unwrap();
        // -0.75 = -1 + 1/4
        assert_eq!(cf.digits(), &[-1, 4]);
        assert_eq!(cf.last_convergent().p, -3);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(cf_expand(f64::NAN, 3, 0.0), Err(Error::NonFinite(_))));
        assert!(matches!(cf_expand(f64::INFINITY, 3, 0.0), Err(Error::NonFinite(_))));
        assert!(cf_expand(0.3, 0, 0.0).is_err());
        assert!(cf_expand(0.3, 3, -1.0).is_err());
    }

    #[test]
    fn f64_input_is_truncated_at_its_precision() {
        let cf = cf_expand(std::f64::consts::SQRT_2, 200, 0.0).unwrap();
        assert_eq!(cf.termination(), Termination::Precision);
        // every kept digit is a genuine digit of sqrt2
        assert!(cf.digits()[1..].iter().all(|&a| a == 2), "{:?}", cf.digits());
        assert!(cf.len() > 15);
        let dd = cf_expand(Real::sqrt2(), 200, 0.0).unwrap();
        assert!(dd.len() > cf.len());
        assert!(dd.digits()[1..].iter().all(|&a| a == 2));
    }

    #[test]
    fn tolerance_stops_early() {
        let cf = cf_expand(std::f64::consts::PI, 50, 1e-6).unwrap();
        assert_eq!(cf.termination(), Termination::Tolerance);
        let c = cf.last_convergent();
        assert_eq!((c.p, c.q), (355, 113));
    }

    #[test]
    fn overflow_reports_last_safe_index() {
        let digits = vec![0, 1_000_000_000, 1_000_000_000, 1_000_000_000];
        match convergents(&digits) {
            Err(Error::ConvergentOverflow { last_safe_index }) => assert_eq!(last_safe_index, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn convergents_are_coprime() {
        let cf = cf_expand(Constant::Pi.real(), 12, 0.0).unwrap();
        for c in cf.convergents() {
            assert_eq!(gcd(c.p.unsigned_abs(), c.q), 1);
        }
    }

    #[test]
    fn delta_is_strictly_decreasing() {
        let cf = cf_expand(Constant::E.real(), 20, 0.0).unwrap();
        let d: Vec<f64> = (0..cf.len() as isize).map(|k| cf.delta(k)).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
        assert_eq!(cf.delta(-1), 1.0);
    }

    #[test]
    fn ostrowski_of_denominators_is_single_digit() {
        let cf = cf_expand(Real::sqrt2(), 20, 0.0).unwrap();
        for k in 0..10 {
            let q = cf.q(k).unwrap();
            let o = ostrowski_expand(q, &cf).unwrap();
            assert_eq!(o.top_index(), k);
            assert_eq!(o.digits()[k], 1);
            assert!(o.digits()[..k].iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn ostrowski_golden_mean_examples() {
        let cf = cf_expand(Real::golden_mean(), 30, 0.0).unwrap();
        let o = ostrowski_expand(4, &cf).unwrap();
        assert_eq!(o.digits(), &[0, 1, 0, 1]);
        let o = ostrowski_expand(7, &cf).unwrap();
        assert_eq!(o.digits(), &[0, 0, 1, 0, 1]);
        o.validate(&cf).unwrap();
    }

    #[test]
    fn ostrowski_needs_large_enough_denominators() {
        let cf = cf_expand(Real::golden_mean(), 5, 0.0).unwrap();
        assert!(matches!(
            ostrowski_expand(100, &cf),
            Err(Error::InsufficientConvergents { .. })
        ));
        assert!(ostrowski_expand(0, &cf).is_err());
    }

    #[test]
    fn ostrowski_handles_large_first_quotient() {
        // pi = [3; 7, 15, 1, 292, ...]: small N use q_0 = 1 with b_0 < 7
        let cf = cf_expand(Constant::Pi.real(), 10, 0.0).unwrap();
        for n in 1..2000 {
            let o = ostrowski_expand(n, &cf).unwrap();
            o.validate(&cf).unwrap();
        }
        let o = ostrowski_expand(105, &cf).unwrap();
        assert_eq!(o.digits(), &[0, 15]);
    }

    #[test]
    fn validate_rejects_non_admissible_digits() {
        let cf = cf_expand(Real::golden_mean(), 30, 0.0).unwrap();
        // 4 = 2 + 2 uses a digit above a_3 = 1
        let bad = OstrowskiDigits {
            n: 4,
            digits: vec![0, 0, 2],
        };
        assert!(bad.validate(&cf).is_err());
        // 3 = 1 + 2 has adjacent non-zero digits
        let bad = OstrowskiDigits {
            n: 3,
            digits: vec![0, 1, 1],
        };
        assert!(bad.validate(&cf).is_err());
    }

    #[test]
    fn torus_norm_examples() {
        assert!((torus_norm(0.3) - 0.3).abs() < 1e-15);
        assert_eq!(torus_norm(0.75), 0.25);
        assert_eq!(torus_norm(17.0), 0.0);
        assert!((torus_norm(-0.3) - 0.3).abs() < 1e-15);
    }
}
