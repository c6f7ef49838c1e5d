//! Exact rational scalars and a few conversions used throughout the crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `p`, `-p`, `p/q` (whitespace is not allowed inside the literal).
pub fn parse_rational(text: &str) -> Option<Q> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let bits = value.numer().bits().max(value.denom().bits()) as i64;
        let shift = (bits - 900).max(0) as usize;
        let n = (value.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (value.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Nearest dyadic rational `m / 2^bits` to `value`.
pub fn round_dyadic(value: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    let scaled = value * Q::from_integer(scale.clone());
    Q::new(scaled.round().to_integer(), scale)
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(value: f64) -> Q {
    Q::from_float(value).unwrap_or_else(Q::zero)
}

pub fn is_integer(value: &Q) -> bool {
    value.denom().is_one()
}
