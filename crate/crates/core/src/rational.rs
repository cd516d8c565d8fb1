//! Exact rational parsing, formatting, and small integer helpers.
//!
//! Distances and parameters are arbitrary-precision rationals throughout the
//! crate; nothing is ever rounded to floating point except for reporting
//! (e.g. the log-density figure in [`crate::metrics`]).

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

/// Exact rational number used for all distances and parameters.
pub type Rat = BigRational;

/// Builds a rational from a small numerator/denominator pair.
///
/// Convenience for literals in tests and generators; panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational denominator must be nonzero");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Error produced when a rational string cannot be parsed exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
    reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

fn parse_err(input: &str, reason: &'static str) -> ParseRationalError {
    ParseRationalError {
        input: input.to_owned(),
        reason,
    }
}

/// Parses a rational from `p/q`, integer, or decimal notation, exactly.
///
/// Accepted forms: `"3"`, `"-7"`, `"3/4"`, `"-3/4"`, `"1.25"`, `"-0.075"`.
/// Decimal strings convert without rounding (`"0.1"` is exactly 1/10).
pub fn parse_rational(s: &str) -> Result<Rat, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err(s, "empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let p = BigInt::from_str(num.trim()).map_err(|_| parse_err(s, "bad numerator"))?;
        let q = BigInt::from_str(den.trim()).map_err(|_| parse_err(s, "bad denominator"))?;
        if q.is_zero() {
            return Err(parse_err(s, "zero denominator"));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.strip_prefix(['+', '-']).unwrap_or(whole);
        if !whole_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(parse_err(s, "bad decimal"));
        }
        let mut digits = String::with_capacity(whole_digits.len() + frac.len());
        digits.push_str(whole_digits);
        digits.push_str(frac);
        if digits.is_empty() {
            return Err(parse_err(s, "bad decimal"));
        }
        let mantissa = BigInt::from_str(&digits).map_err(|_| parse_err(s, "bad decimal"))?;
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let value = Rat::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let p = BigInt::from_str(s).map_err(|_| parse_err(s, "bad integer"))?;
    Ok(Rat::from_integer(p))
}

/// Formats a rational canonically: `"p"` when the denominator is 1, else `"p/q"`.
///
/// The output is always reduced, so equal rationals format identically; this
/// is what keeps serialized reports byte-stable.
pub fn format_rational(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Smallest `t` with `2^t >= n`; `ceil_log2(0)` and `ceil_log2(1)` are 0.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// True when the rational is strictly positive.
pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
