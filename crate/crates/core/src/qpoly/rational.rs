//! Helpers around `BigRational`: string form, dyadic rounding and
//! directed square-root bounds.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Failure to parse a number from its string form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as {expected}")]
pub struct ParseNumberError {
    pub input: String,
    pub expected: &'static str,
}

impl ParseNumberError {
    pub(crate) fn new(input: &str, expected: &'static str) -> Self {
        ParseNumberError {
            input: input.to_string(),
            expected,
        }
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`, normalized. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, omitting `/q` when `q = 1`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or `-p/q` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, ParseNumberError> {
    let t = s.trim();
    let err = || ParseNumberError::new(s, "rational p/q");
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    if n.is_empty() || d.is_empty() || d.starts_with(['-', '+']) {
        return Err(err());
    }
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Wrapper giving a rational the `p/q` display form.
pub struct Display<'a>(pub &'a Rational);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// `x · 2^k` without normalization round-trips through gcd.
pub fn mul_pow2(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        Rational::new(x.numer() << (k as usize), x.denom().clone())
    } else {
        Rational::new(x.numer().clone(), x.denom() << ((-k) as usize))
    }
}

/// `floor(log2(x))` for `x > 0`.
pub fn floor_log2(x: &Rational) -> i64 {
    assert!(x.is_positive(), "floor_log2 of a non-positive rational");
    let n = x.numer();
    let d = x.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= x  <=>  n >= d·2^e
    let ge = |e: i64| -> bool {
        if e >= 0 {
            *n >= (d << (e as usize))
        } else {
            (n << ((-e) as usize)) >= *d
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    e
}

/// Largest `m·2^e ≤ x` whose mantissa `m` has at most `bits` bits.
pub fn round_down_dyadic(x: &Rational, bits: u32) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    if x.is_negative() {
        return -round_up_dyadic(&-x, bits);
    }
    let e = floor_log2(x);
    let shift = bits as i64 - 1 - e;
    let m = Rational::from_integer(scaled_floor(x, shift));
    mul_pow2(&m, -shift)
}

/// Smallest `m·2^e ≥ x` whose mantissa `m` has at most `bits + 1` bits.
pub fn round_up_dyadic(x: &Rational, bits: u32) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    if x.is_negative() {
        return -round_down_dyadic(&-x, bits);
    }
    let e = floor_log2(x);
    let shift = bits as i64 - 1 - e;
    let m = Rational::from_integer(-scaled_floor(&-x, shift));
    mul_pow2(&m, -shift)
}

/// `⌊x·2^k⌋` by one integer division; `x` need not be in lowest terms.
fn scaled_floor(x: &Rational, k: i64) -> BigInt {
    let (n, d) = (x.numer(), x.denom());
    if k >= 0 {
        (n << (k as usize)).div_floor(d)
    } else {
        n.div_floor(&(d << ((-k) as usize)))
    }
}

fn sqrt_scaling(x: &Rational, bits: u32) -> i64 {
    // choose s with x·4^s >= 4^bits
    bits as i64 + 1 - floor_log2(x).div_euclid(2)
}

/// Rational `y ≤ sqrt(x)` with relative error about `2^-bits`.
pub fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    if x.is_zero() {
        return Rational::zero();
    }
    let s = sqrt_scaling(x, bits);
    let y = scaled_floor(x, 2 * s);
    let q = y.sqrt();
    mul_pow2(&Rational::from_integer(q), -s)
}

/// Rational `y ≥ sqrt(x)` with relative error about `2^-bits`.
pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    if x.is_zero() {
        return Rational::zero();
    }
    let s = sqrt_scaling(x, bits);
    let y = -scaled_floor(&-x, 2 * s);
    let mut q = y.sqrt();
    if &q * &q < y {
        q += 1;
    }
    mul_pow2(&Rational::from_integer(q), -s)
}

/// Nearest-ish `f64`; saturates to `±inf`/`0` outside the double range.
pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if x.is_zero() {
        return 0.0;
    }
    let e = floor_log2(&x.abs());
    let m = mul_pow2(x, -e).to_f64().unwrap_or(1.0);
    m * 2f64.powi(e.clamp(-2000, 2000) as i32)
}

/// Exact `x^e` for a small exponent.
pub fn pow(x: &Rational, e: u64) -> Rational {
    num_traits::pow::Pow::pow(x, BigInt::from(e))
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}
