//! Exact rational scalars: decimal parsing and canonical rendering.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational used for every strength level, GDoF value and power exponent.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {text:?} as an exact decimal or p/q rational")]
pub struct ParseRationalError {
    pub text: String,
}

/// Parses `"1"`, `"-0.25"`, `"1.5e-3"`, `".5"` or `"3/7"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError {
        text: text.to_string(),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let mut value: BigInt = all.parse().map_err(|_| err())?;
    if negative {
        value = -value;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let q = if scale >= 0 {
        Q::from_integer(value * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(value, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

/// Renders a rational as a terminating decimal when possible, otherwise as `p/q`.
pub fn render(q: &Q) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let mut den = q.denom().clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = twos.max(fives);
    let scaled = q.abs() * Q::from_integer(num_traits::pow(BigInt::from(10u8), places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.to_integer().to_string();
    let digits = if digits.len() <= places {
        let mut padded = "0".repeat(places + 1 - digits.len());
        padded.push_str(&digits);
        padded
    } else {
        digits
    };
    let split = digits.len() - places;
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}", &digits[..split], &digits[split..])
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Shorthand for building rationals from decimal literals in code and tests.
///
/// Panics on malformed input.
pub fn q(text: &str) -> Q {
    parse_rational(text).unwrap_or_else(|e| panic!("{e}"))
}

pub(crate) fn max_q<'a>(values: impl IntoIterator<Item = &'a Q>) -> Option<&'a Q> {
    values.into_iter().max()
}

pub(crate) fn min_q<'a>(values: impl IntoIterator<Item = &'a Q>) -> Option<&'a Q> {
    values.into_iter().min()
}

pub(crate) fn positive_part(x: Q) -> Q {
    if x.is_negative() {
        Q::zero()
    } else {
        x
    }
}
