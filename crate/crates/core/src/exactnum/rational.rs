//! Exact rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, which is kept in lowest terms
//! with a positive denominator after every operation. This module adds the
//! parsing and text conventions used throughout the crate: rationals are
//! written as `"p/q"` (or `"p"` when integral), and inputs may also be given
//! as exact decimal strings such as `"0.125"` or `"-1.5e-3"`.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"`, or a decimal literal (with optional exponent)
/// into an exact rational. Decimals never pass through binary floats.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| bad())?
    };
    let shift = exponent - frac.len() as i64;
    if shift.unsigned_abs() > 100_000 {
        return Err(Error::Parse(format!("exponent out of range in {text:?}")));
    }
    let scale: BigInt = BigInt::from(10u32).pow(shift.unsigned_abs() as u32);
    let mut value = if shift >= 0 {
        Rational::from_integer(numer * scale)
    } else {
        Rational::new(numer, scale)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    // Scale down huge numerators/denominators together so the ratio survives.
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let bits = r.numer().bits().max(r.denom().bits());
            let shift = bits.saturating_sub(1000) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Serde adapter writing a [`Rational`] as a `"p/q"` string and reading
/// either such a string, a decimal string, or a JSON number (via its
/// decimal text, so `0.1` means exactly 1/10).
pub mod serde_str {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Int(i64),
        Float(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse_rational(&t).map_err(de::Error::custom),
            Repr::Int(i) => Ok(int(i)),
            Repr::Float(f) => {
                // Shortest round-trip decimal of the float, parsed exactly.
                parse_rational(&format!("{f:e}")).map_err(de::Error::custom)
            }
        }
    }
}

/// Serde adapter for row-major nested arrays of rationals.
pub mod serde_rows {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Cell(#[serde(with = "super::serde_str")] Rational);

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let cells: Vec<Vec<Cell>> = rows.iter().map(|row| row.iter().cloned().map(Cell).collect()).collect();
        cells.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let cells: Vec<Vec<Cell>> = Vec::deserialize(d)?;
        Ok(cells
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.0).collect())
            .collect())
    }
}

/// Serde adapter for flat arrays of rationals.
pub mod serde_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Cell(#[serde(with = "super::serde_str")] Rational);

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().cloned().map(Cell).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Ok(Vec::<Cell>::deserialize(d)?.into_iter().map(|c| c.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("1/10").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("17").unwrap(), int(17));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1.5e-3").unwrap(), ratio(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), int(200));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(exact_sqrt(&ratio(9, 49)), Some(ratio(3, 7)));
        assert_eq!(exact_sqrt(&ratio(2, 1)), None);
        assert_eq!(exact_sqrt(&ratio(-1, 1)), None);
    }

    #[test]
    fn huge_values_convert_to_float() {
        let big = Rational::new(BigInt::from(10u32).pow(400u32) * 3, BigInt::from(10u32).pow(400u32));
        assert!((to_f64(&big) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn json_numbers_are_read_as_decimals() {
        #[derive(serde::Deserialize)]
        struct W(#[serde(with = "serde_str")] Rational);
        let w: W = serde_json::from_str("0.1").unwrap();
        assert_eq!(w.0, ratio(1, 10));
        let w: W = serde_json::from_str("\"3/9\"").unwrap();
        assert_eq!(w.0, ratio(1, 3));
    }
}
