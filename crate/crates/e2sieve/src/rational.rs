//! Arbitrary-precision rational helpers: factorial and binomial caches and
//! the `p/q` string form used by every serialised artifact.

use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

static FACTORIALS: LazyLock<RwLock<Vec<BigInt>>> =
    LazyLock::new(|| RwLock::new(vec![BigInt::one()]));

/// `n!` as a big integer, memoised process-wide.
pub fn factorial(n: usize) -> BigInt {
    {
        let cache = FACTORIALS.read().unwrap();
        if n < cache.len() {
            return cache[n].clone();
        }
    }
    let mut cache = FACTORIALS.write().unwrap();
    while cache.len() <= n {
        let next = cache.last().unwrap() * BigInt::from(cache.len());
        cache.push(next);
    }
    cache[n].clone()
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Rational from an integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `p/q` from machine integers. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `1 / n!` as a rational.
pub fn inv_factorial(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), factorial(n))
}

/// Parses `"p/q"` or a bare integer `"p"` (optional sign, reduced on read).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise (q > 0).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal expansion of `r` truncated toward zero to `digits` fractional
/// digits, e.g. `-10/3` at 4 digits is `"-3.3333"`.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs * BigRational::from_integer(scale.clone())).trunc();
    let total = scaled.numer().clone();
    let (int_part, frac_part) = (total.clone() / &scale, total % &scale);
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{frac_part:0>width$}", width = digits)
}

fn decimal_of_scaled(v: &BigInt, digits: usize) -> String {
    let sign = if v.is_negative() { "-" } else { "" };
    let abs = v.magnitude().to_string();
    if digits == 0 {
        return format!("{sign}{abs}");
    }
    let padded = format!("{abs:0>width$}", width = digits + 1);
    let split = padded.len() - digits;
    format!("{sign}{}.{}", &padded[..split], &padded[split..])
}

/// Decimal expansion rounded toward minus infinity: a valid printed lower
/// bound for `r` at the given number of fractional digits.
pub fn decimal_floor(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let v = (r * BigRational::from_integer(scale)).floor().to_integer();
    decimal_of_scaled(&v, digits)
}

/// Decimal expansion rounded toward plus infinity: a valid printed upper
/// bound for `r` at the given number of fractional digits.
pub fn decimal_ceil(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let v = (r * BigRational::from_integer(scale)).ceil().to_integer();
    decimal_of_scaled(&v, digits)
}

/// Parses a plain decimal literal (`"-3.0353"`) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    let p: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad decimal literal {s:?}")))?;
    let q = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(p, q))
}

/// Splits `r` as `mantissa * 2^exp` with `|mantissa|` in `[1/2, 1)`, rounded
/// to double precision; `(0.0, 0)` for zero. Heuristic use only.
pub fn to_f64_exp(r: &BigRational) -> (f64, i64) {
    if r.is_zero() {
        return (0.0, 0);
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let shift = n.bits() as i64 - d.bits() as i64;
    // q ~ |r| * 2^(64 - shift), inside [2^63, 2^65); exact shifts, one division
    let q = if shift >= 0 {
        (n << 64u32) / (d << shift as u32)
    } else {
        (n << (64 + (-shift) as u32)) / d
    };
    let mut mantissa = q.to_f64().unwrap_or(f64::MAX) / 2f64.powi(64);
    let mut exp = shift;
    // renormalise into [1/2, 1)
    while mantissa >= 1.0 {
        mantissa /= 2.0;
        exp += 1;
    }
    while mantissa < 0.5 {
        mantissa *= 2.0;
        exp -= 1;
    }
    if r.is_negative() {
        mantissa = -mantissa;
    }
    (mantissa, exp)
}

/// Nearest double to `r`, saturating on overflow. Heuristic use only.
pub fn to_f64(r: &BigRational) -> f64 {
    let (m, e) = to_f64_exp(r);
    if e > 1040 {
        return if m < 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    if e < -1080 {
        return 0.0;
    }
    m * 2f64.powi(e as i32)
}
