//! Exact rational helpers and their `[num, den]` JSON form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_u128(num: u128, den: &BigInt) -> Q {
    Q::new(BigInt::from(num), den.clone())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// `|v| · scale` as a machine integer; `scale` must clear the denominator.
pub fn scaled_magnitude(v: &Q, scale: &BigInt) -> Result<u128> {
    let n = (v.numer().abs() * scale) / v.denom();
    n.to_u128()
        .ok_or_else(|| Error::capacity("coordinate magnitude bits", n.bits() as usize, 128))
}

/// Rational as a JSON `[num, den]` pair; integers outside `i64` become strings.
pub fn q_json(v: &Q) -> Value {
    Value::Array(vec![int_json(v.numer()), int_json(v.denom())])
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => Value::from(i),
        None => Value::String(n.to_string()),
    }
}

fn json_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::invalid(format!("`{n}` is not an integer"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::invalid(format!("`{s}` is not an integer"))),
        other => Err(Error::invalid(format!("expected an integer, found {other}"))),
    }
}

/// Parses a `[num, den]` pair.
pub fn json_q(v: &Value) -> Result<Q> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::invalid("rational must be a [num, den] pair"))?;
    rational_from(json_int(&pair[0])?, json_int(&pair[1])?)
}

pub(crate) fn rational_from(num: BigInt, den: BigInt) -> Result<Q> {
    if den.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(Q::new(num, den))
}

pub(crate) fn parse_int(v: &Value) -> Result<BigInt> {
    json_int(v)
}

/// Parses `3`, `-3/4` or `0.125` exactly.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || Error::invalid(format!("`{text}` is not a rational number"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        return rational_from(n, d);
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs() * &den + f;
        let num = if negative { -mag } else { mag };
        return rational_from(num, den);
    }
    Ok(Q::from_integer(t.parse().map_err(|_| bad())?))
}

/// Approximate decimal rendering for display only.
pub fn approx(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
