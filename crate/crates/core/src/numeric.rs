//! Exact rational helpers and the deterministic dyadic approximations used
//! inside parameter formulas.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for every weight and parameter.
pub type Rational = BigRational;

/// Fractional bits of every dyadic approximation.
pub const DYADIC_BITS: u32 = 20;

const FIXED_BITS: u32 = 62;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `num/den`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
        let den: BigInt = den.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), frac);
        if frac.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {text:?}"));
        }
        let num: BigInt = digits.parse().map_err(|_| format!("bad decimal {text:?}"))?;
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = Rational::new(num, den);
        return Ok(if negative { -value } else { value });
    }
    let num: BigInt = text.parse().map_err(|_| format!("bad number {text:?}"))?;
    Ok(Rational::from_integer(num))
}

/// Renders as `num/den`, or `num` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering truncated to `digits` places. Display only.
pub fn decimal_string(value: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = (value.abs() * Rational::from_integer(scale)).floor().to_integer();
    let text = scaled.to_string();
    let padded = format!("{text:0>width$}", width = digits + 1);
    let (whole, frac) = padded.split_at(padded.len() - digits);
    let sign = if value.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::MAX)
}

pub fn dyadic(numerator: BigInt) -> Rational {
    Rational::new(numerator, BigInt::one() << DYADIC_BITS)
}

/// Base-2 logarithm rounded down to the dyadic grid, computed with integer
/// arithmetic only.
pub fn log2_dyadic(x: &Rational) -> Result<Rational> {
    if !x.is_positive() {
        return Err(Error::InvalidParameter("logarithm of a non-positive number".into()));
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let mut exponent = num.bits() as i64 - den.bits() as i64;
    if !ge_pow2(num, den, exponent) {
        exponent -= 1;
    }
    let shift = FIXED_BITS as i64 - exponent;
    let mantissa: BigUint = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let mut m = mantissa.to_u128().expect("mantissa in [2^62, 2^63)");
    let mut fraction: i64 = 0;
    for _ in 0..DYADIC_BITS {
        m = (m * m) >> FIXED_BITS;
        fraction <<= 1;
        if m >= 1u128 << (FIXED_BITS + 1) {
            fraction |= 1;
            m >>= 1;
        }
    }
    let total = (BigInt::from(exponent) << DYADIC_BITS) + BigInt::from(fraction);
    Ok(dyadic(total))
}

fn ge_pow2(num: &BigUint, den: &BigUint, exponent: i64) -> bool {
    if exponent >= 0 {
        num >= &(den << exponent as u64)
    } else {
        (num << (-exponent) as u64) >= *den
    }
}

/// `max(1, log2(x))` on the dyadic grid. Parameter formulas multiply by
/// logarithms, so they must never collapse to zero.
pub fn log2_clamped(x: &Rational) -> Result<Rational> {
    let value = log2_dyadic(x)?;
    Ok(if value < Rational::one() { Rational::one() } else { value })
}

/// `max(1, log2(max(1, log2(x))))`.
pub fn loglog2_clamped(x: &Rational) -> Result<Rational> {
    log2_clamped(&log2_clamped(x)?)
}

/// Square root rounded down to the dyadic grid.
pub fn sqrt_dyadic(x: &Rational) -> Rational {
    if !x.is_positive() {
        return Rational::zero();
    }
    let scaled = (x * Rational::from_integer(BigInt::one() << (2 * DYADIC_BITS)))
        .floor()
        .to_integer();
    dyadic(scaled.sqrt())
}

/// `floor(sqrt(x))` as an exact integer.
pub fn floor_sqrt(x: &Rational) -> BigUint {
    if !x.is_positive() {
        return BigUint::zero();
    }
    x.floor().to_integer().magnitude().sqrt()
}

pub fn floor_to_biguint(x: &Rational) -> BigUint {
    if !x.is_positive() {
        return BigUint::zero();
    }
    x.floor().to_integer().magnitude().clone()
}

pub fn ceil_to_biguint(x: &Rational) -> BigUint {
    if !x.is_positive() {
        return BigUint::zero();
    }
    x.ceil().to_integer().magnitude().clone()
}

pub fn from_biguint(value: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, value.clone()))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
