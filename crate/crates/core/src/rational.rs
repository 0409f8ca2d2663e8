//! The universal scalar: canonical arbitrary-precision fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact fraction with positive denominator in lowest terms.
///
/// Display gives `p/q`, or `p` when `q = 1`; `parse` accepts the same.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn big(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Domain(alloc::format!("not a rational: {s:?}")))
}

/// Largest integer `k` with `k <= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x * y
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn canonical_form_and_display() {
        let x = frac(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(int(5).to_string(), "5");
        assert_eq!(parse("10/4").unwrap(), frac(5, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn floor_rounds_toward_negative_infinity() {
        assert_eq!(floor(&frac(5, 2)), BigInt::from(2));
        assert_eq!(floor(&frac(-5, 2)), BigInt::from(-3));
        assert_eq!(floor(&int(4)), BigInt::from(4));
    }
}
