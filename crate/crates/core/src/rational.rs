//! The exact scalar used throughout the crate, plus text conversions.
//!
//! Values are `num_rational::BigRational`, which keeps every result in
//! canonical form (positive denominator, coprime parts). The wire format is
//! the string `"p/q"`, or `"p"` when the denominator is one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"-0.25"`.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad(s))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad(s))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, digits)) = t.split_once('.') {
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(s));
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad(s))?
        };
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let tail = BigInt::from_str(digits).map_err(|_| bad(s))?;
        let mag = whole.abs() * &scale + tail;
        let numer = if negative { -mag } else { mag };
        return Ok(Rational::new(numer, scale));
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad(s))
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("not a rational: {s:?}"))
}

/// Canonical `"p/q"` / `"p"` form.
pub fn to_string(r: &Rational) -> String {
    r.to_string()
}

/// Decimal approximation with `digits` significant digits, rounded half away
/// from zero. Uses plain notation for moderate magnitudes and scientific
/// notation otherwise.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".into();
    }
    let negative = r.is_negative();
    let a = r.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let mut e = approx_log10(&a);
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let mut mant = round_half_up(&scaled);
    if mant >= BigInt::from(10u32).pow(digits as u32) {
        mant /= 10;
        e += 1;
    }
    let mut s = mant.to_string();
    let sign = if negative { "-" } else { "" };
    if (-7..15).contains(&e) {
        // plain notation: value = mant * 10^(e - digits + 1)
        let point = e + 1; // digits before the decimal point
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), s)
        } else if point as usize >= s.len() {
            s.push_str(&"0".repeat(point as usize - s.len()));
            s
        } else {
            let (a, b) = s.split_at(point as usize);
            format!("{a}.{b}")
        };
        format!("{sign}{}", trim_zeros(body))
    } else {
        let (a, b) = s.split_at(1);
        let m = if b.is_empty() { a.to_string() } else { trim_zeros(format!("{a}.{b}")) };
        format!("{sign}{m}e{e}")
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn approx_log10(a: &Rational) -> i64 {
    let n = a.numer().to_str_radix(10).len() as i64;
    let d = a.denom().to_str_radix(10).len() as i64;
    n - d
}

fn pow10(e: i64) -> Rational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn round_half_up(x: &Rational) -> BigInt {
    // x >= 0
    let (q, r) = x.numer().div_rem(x.denom());
    if r * 2 >= *x.denom() {
        q + 1
    } else {
        q
    }
}

/// `"4/9 (≈ 0.444444444444)"`: the exact value plus a 12-digit decimal.
pub fn display_with_approx(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_string();
    }
    format!("{} (≈ {})", r, to_decimal(r, 12))
}

/// Integer `n`-th root of a nonnegative rational to `digits` decimal places,
/// truncated toward zero. Exact integer arithmetic; no floating point.
pub fn nth_root_decimal(r: &Rational, n: u32, digits: u32) -> Rational {
    assert!(!r.is_negative(), "root of a negative value");
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale.pow(n));
    let floor = scaled.numer() / scaled.denom();
    Rational::new(floor.nth_root(n), scale)
}

/// Serde adapter carrying a [`Rational`] as its canonical string. Integer
/// JSON numbers are accepted on input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalStr(pub Rational);

impl From<Rational> for RationalStr {
    fn from(r: Rational) -> Self {
        RationalStr(r)
    }
}

impl fmt::Display for RationalStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for RationalStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalStr;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RationalStr, E> {
                parse(v).map(RationalStr).map_err(|_| E::custom(format!("not a rational: {v:?}")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RationalStr, E> {
                Ok(RationalStr(int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RationalStr, E> {
                Ok(RationalStr(Rational::from_integer(BigInt::from(v))))
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("4/9").unwrap(), frac(4, 9));
        assert_eq!(parse("8/-6").unwrap(), frac(-4, 3));
        assert_eq!(parse(" 5 ").unwrap(), int(5));
        assert_eq!(parse("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse(".5").unwrap(), frac(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(to_string(&frac(6, 4)), "3/2");
        assert_eq!(to_string(&frac(-6, 3)), "-2");
        assert_eq!(to_string(&int(0)), "0");
    }

    #[test]
    fn decimal_approximation() {
        assert_eq!(to_decimal(&frac(4, 9), 12), "0.444444444444");
        assert_eq!(to_decimal(&frac(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&frac(75, 64), 12), "1.171875");
        assert_eq!(to_decimal(&frac(-1, 8), 12), "-0.125");
        assert_eq!(to_decimal(&int(123456), 3), "123000");
        assert_eq!(to_decimal(&frac(1, 1_000_000_000), 3), "1e-9");
        assert_eq!(to_decimal(&frac(999_999, 1_000_000), 3), "1");
        assert_eq!(display_with_approx(&frac(4, 9)), "4/9 (≈ 0.444444444444)");
        assert_eq!(display_with_approx(&int(1)), "1");
    }

    #[test]
    fn integer_roots() {
        assert_eq!(nth_root_decimal(&int(8), 3, 4), int(2));
        assert_eq!(nth_root_decimal(&int(2), 2, 3), frac(1414, 1000));
    }

    #[test]
    fn serde_round_trip() {
        let v: Vec<RationalStr> = serde_json::from_str(r#"["1/3", 2, "-4/6"]"#).unwrap();
        assert_eq!(v[2].0, frac(-2, 3));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/3","2","-2/3"]"#);
    }
}
