//! Exact rational scalars and their canonical text form.
//!
//! Accepted token grammar: `[-]digits`, `[-]digits/digits` (positive
//! denominator) or `[-]digits.digits`. Decimals are converted exactly
//! through powers of ten.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// How a token was written; decimal tokens get a tolerance in conjugate
/// matching, fractions do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Integer,
    Fraction,
    Decimal,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact binary value of a finite float.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        if v.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses one token; `line` is used only for error reporting.
pub fn parse_token(token: &str, line: usize) -> Result<(Rational, Notation)> {
    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let bad = || Error::parse(line, format!("malformed number `{token}`"));

    let (value, notation) = if let Some((num, den)) = body.split_once('/') {
        if !digits(num) || !digits(den) {
            return Err(bad());
        }
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::parse(line, format!("zero denominator in `{token}`")));
        }
        let num: BigInt = num.parse().map_err(|_| bad())?;
        (Rational::new(num, den), Notation::Fraction)
    } else if let Some((whole, fraction)) = body.split_once('.') {
        if !digits(whole) || !digits(fraction) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(fraction.len() as u32);
        let num: BigInt = format!("{whole}{fraction}").parse().map_err(|_| bad())?;
        (Rational::new(num, scale), Notation::Decimal)
    } else {
        if !digits(body) {
            return Err(bad());
        }
        let num: BigInt = body.parse().map_err(|_| bad())?;
        (Rational::from_integer(num), Notation::Integer)
    };
    Ok((if negative { -value } else { value }, notation))
}

pub fn parse(token: &str) -> Result<Rational> {
    parse_token(token, 1).map(|(v, _)| v)
}

/// Lowest-terms `p/q`, or a bare integer when `q = 1`.
pub fn format(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn abs(v: &Rational) -> Rational {
    v.abs()
}
