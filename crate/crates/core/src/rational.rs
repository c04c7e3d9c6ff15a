//! Exact rational numbers used for masses, distances and curvature values.
//!
//! Everything upstream of modularity and ARI is computed in arbitrary
//! precision rationals, so worked examples reproduce bit-exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a rational (expected `p/q`, an integer or a decimal)")]
pub struct ParseRationalError(pub String);

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Positive part `max(a, 0)`.
pub fn positive_part(a: &Rational) -> Rational {
    if a.is_positive() {
        a.clone()
    } else {
        Rational::zero()
    }
}

/// Parses `p/q`, `-p/q`, integers and finite decimals (`0.25`, `-1.5`, `1e-3`).
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| err())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{}{}", whole, frac);
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
        .map_err(|_| err())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Renders as `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator pairs: fall back to a scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Decimal rendering used for DOT labels and `--floats` output.
pub fn to_decimal_string(r: &Rational, digits: usize) -> String {
    let v = to_f64(r);
    let s = format!("{:.*}", digits, v);
    let trimmed = s.trim_end_matches('0');
    let trimmed = trimmed.strip_suffix('.').map(|t| format!("{}.0", t));
    match trimmed {
        Some(t) => t,
        None => s.trim_end_matches('0').to_string(),
    }
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
