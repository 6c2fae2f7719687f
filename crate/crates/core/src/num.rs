//! Scalar abstraction for weights and bounds.
//!
//! Every weight in this crate is a polynomial in the distribution parameters,
//! so the math only needs a commutative ring with division and an order.
//! Exact runs use [`BigRational`]; floats are there for quick exploration.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::error::ParseRationalError;

/// Numeric type usable as a probability weight.
pub trait Scalar: Num + Clone + Debug + PartialOrd + Send + Sync + 'static {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    fn from_count(k: u64) -> Self {
        Self::from_ratio(k as i64, 1)
    }

    fn to_f64(&self) -> f64;

    /// Text for reports: `"num/den"` for exact values, decimal otherwise.
    fn render(&self) -> String;

    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    /// Whether comparisons on this type are exact.
    fn is_exact() -> bool;

    /// `(num, den)` with `0 <= num <= den`, when the value is a fraction small
    /// enough for exact Bernoulli sampling.
    fn as_u64_fraction(&self) -> Option<(u64, u64)> {
        None
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_count(k: u64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn render(&self) -> String {
        format_rational(self)
    }

    fn is_exact() -> bool {
        true
    }

    fn as_u64_fraction(&self) -> Option<(u64, u64)> {
        let n = self.numer().to_u64()?;
        let d = self.denom().to_u64()?;
        (n <= d).then_some((n, d))
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn from_rational(r: &BigRational) -> Self {
                ratio_to_f64(r) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn render(&self) -> String {
                format!("{self:?}")
            }

            fn is_exact() -> bool {
                false
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerator/denominator: scale both down by a common power of two.
    let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// `base^(halves / 2)` for a nonnegative base.
///
/// Lemma bounds with odd half-exponents are irrational in general; comparing
/// `w <= base^(h/2)` as `w^2 <= base^h` keeps the check exact.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPower<T> {
    pub base: T,
    pub halves: u32,
}

impl<T: Scalar> HalfPower<T> {
    pub fn integral(base: T, exp: u32) -> Self {
        HalfPower { base, halves: 2 * exp }
    }

    pub fn half(base: T, halves: u32) -> Self {
        HalfPower { base, halves }
    }

    /// The value itself, when it is a plain power.
    pub fn as_power(&self) -> Option<T> {
        (self.halves % 2 == 0).then(|| self.base.powu(self.halves / 2))
    }

    pub fn to_f64(&self) -> f64 {
        self.base.to_f64().powf(self.halves as f64 / 2.0)
    }

    /// Compares a nonnegative value against this bound.
    pub fn cmp_value(&self, w: &T) -> Ordering {
        let (lhs, rhs) = match self.as_power() {
            Some(v) => (w.clone(), v),
            None => (w.clone() * w.clone(), self.base.powu(self.halves)),
        };
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Greater)
    }

    pub fn admits(&self, w: &T) -> bool {
        self.cmp_value(w) != Ordering::Greater
    }

    /// `self <= other`; both sides are nonnegative so squaring preserves order.
    pub fn le(&self, other: &HalfPower<T>) -> bool {
        self.base.powu(self.halves) <= other.base.powu(other.halves)
    }
}

impl<T: Scalar> HalfPower<T> {
    /// The value for plain powers, `"(base)^(h/2)"` otherwise.
    pub fn render(&self) -> String {
        match self.as_power() {
            Some(v) => v.render(),
            None => format!("({})^({}/2)", self.base.render(), self.halves),
        }
    }
}

/// Parses `"a/b"` or an integer into an exact rational. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseRationalError> {
    let t = text.trim();
    let bad = || ParseRationalError(t.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let digits = |s: &str| {
        let body = s.strip_prefix('-').unwrap_or(s);
        !body.is_empty() && body.bytes().all(|c| c.is_ascii_digit())
    };
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"num/den"` text; integers keep the `/1` so readers need one rule.
pub fn format_rational(r: &BigRational) -> String {
    let mut r = r.clone();
    if r.denom().is_negative() {
        r = BigRational::new(-r.numer().clone(), -r.denom().clone());
    }
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn one_minus<T: Scalar>(x: &T) -> T {
    T::one() - x.clone()
}

pub(crate) fn in_unit_interval<T: Scalar>(x: &T) -> bool {
    *x >= T::zero() && *x <= T::one()
}

/// `n!` as a scalar.
pub(crate) fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n as u64).fold(T::one(), |acc, k| acc * T::from_count(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("1/10").unwrap(), q(1, 10));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), q(1, 2));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
    }

    #[test]
    fn parse_rejects_decimals_and_zero_denominators() {
        assert!(parse_rational("0.1").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn half_power_compares_exactly() {
        // 2^(1/2) ~ 1.41421
        let b = HalfPower::half(q(2, 1), 1);
        assert!(b.admits(&q(141, 100)));
        assert!(!b.admits(&q(142, 100)));
        let c = HalfPower::integral(q(1, 3), 2);
        assert!(c.admits(&q(1, 9)));
        assert!(!c.admits(&q(1, 8)));
        assert_eq!(c.render(), "1/9");
        assert_eq!(b.render(), "(2/1)^(1/2)");
    }

    #[test]
    fn half_power_order() {
        let a = HalfPower::integral(q(8, 9), 2);
        let b = HalfPower::integral(q(9, 10), 2);
        assert!(a.le(&b));
        assert!(!b.le(&a));
        let c = HalfPower::half(q(1, 4), 3); // 1/8
        assert!(c.le(&HalfPower::integral(q(1, 8), 1)));
        assert!(!c.le(&HalfPower::integral(q(1, 9), 1)));
    }
}
