//! Exact rationals for exponents, phases and Gram entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Real;
use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p/q` or `p` with an optional leading minus sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-').or_else(|| t.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(Error::parse(s, "expected p/q or p with decimal digits"));
    }
    let n: BigInt = num.parse().map_err(|_| Error::parse(s, "bad numerator"))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| Error::parse(s, "bad denominator"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::parse(s, "zero denominator"));
    }
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Comma separated list of rationals; the empty string is the empty list.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn is_integer(m: &Rational) -> bool {
    m.denom().is_one()
}

pub fn to_i64(m: &Rational) -> Option<i64> {
    if is_integer(m) {
        m.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(m: &Rational) -> f64 {
    m.to_f64().unwrap_or(f64::NAN)
}

pub fn to_real<T: Real>(m: &Rational) -> T {
    T::from_f64(to_f64(m)).unwrap()
}

/// Canonical representative of `m` modulo `modulus` in `[0, modulus)`.
pub fn rem_euclid(m: &Rational, modulus: i64) -> Rational {
    let md = BigInt::from(modulus);
    let den = m.denom().clone();
    let num = m.numer().mod_floor(&(&md * &den));
    Rational::new(num, den)
}

/// The fractional part `m - floor(m)`.
pub fn frac(m: &Rational) -> Rational {
    m - m.floor()
}

pub fn abs(m: &Rational) -> Rational {
    m.abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
