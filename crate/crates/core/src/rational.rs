//! Exact rational numbers.
//!
//! Everything numeric in this crate is a [`Rational`]; floating point never
//! enters the computation. Literals are accepted as `p`, `p/q` or a finite
//! decimal such as `0.6`, which is converted exactly to `3/5`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{FlowError, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p`, `p/q`, `-p/q` or a decimal literal like `1.25` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || FlowError::MalformedRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num).ok_or_else(bad)?;
        let den = parse_digits(den).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        Rational::new(num, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(whole).ok_or_else(bad)?
        };
        let frac_num = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(frac).ok_or_else(bad)?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Rational::from_integer(whole) + Rational::new(frac_num, scale)
    } else {
        Rational::from_integer(parse_digits(body).ok_or_else(bad)?)
    };
    Ok(if negative { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical `p` / `p/q` rendering (lowest terms, sign on the numerator).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> Rational {
    items.into_iter().fold(zero(), |acc, q| acc + q)
}

/// `(value as rendered string)` serde adapter for exact output.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_vec {
    use super::{format_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }
}
