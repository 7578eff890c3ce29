//! Conversions between exact rationals and decimal text.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fock::ExactRational;

pub fn pow10(e: i64) -> ExactRational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        ExactRational::from_integer(p)
    } else {
        ExactRational::new(BigInt::one(), p)
    }
}

/// Largest `e` with `10^e <= x`, for `x > 0`.
pub fn floor_log10(x: &ExactRational) -> i64 {
    debug_assert!(x.is_positive());
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    while pow10(e) > *x {
        e -= 1;
    }
    while pow10(e + 1) <= *x {
        e += 1;
    }
    e
}

/// Rounds towards zero, keeping `digits` significant decimal digits.
pub fn truncate_significant(x: &ExactRational, digits: u32) -> ExactRational {
    if x.is_zero() {
        return x.clone();
    }
    let shift = i64::from(digits) - 1 - floor_log10(&x.abs());
    (x * pow10(shift)).trunc() * pow10(-shift)
}

/// Scientific notation with `digits` significant digits, rounding half away
/// from zero, e.g. `-1.2500e-3`. Zero prints as `0`.
pub fn format_significant(x: &ExactRational, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let abs = x.abs();
    let mut exponent = floor_log10(&abs);
    let scaled = &abs * pow10(i64::from(digits) - 1 - exponent);
    let mut mantissa = scaled.round().to_integer();
    if mantissa >= num_traits::pow(BigInt::from(10), digits as usize) {
        mantissa = mantissa.div_floor(&BigInt::from(10));
        exponent += 1;
    }
    let text = mantissa.to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    let (head, tail) = text.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exponent}")
    } else {
        format!("{sign}{head}.{tail}e{exponent}")
    }
}

/// Parses `12`, `-0.25`, `1e-3`, `3.5E2` or `7/9` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<ExactRational> {
    let bad = || Error::InvalidParameter(format!("not a number: {text:?}"));
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(ExactRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let value = ExactRational::from_integer(digits) * pow10(exponent - frac_part.len() as i64);
    Ok(if negative { -value } else { value })
}
