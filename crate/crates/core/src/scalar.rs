//! Scalar fields the algebra code is generic over.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

/// A field usable for structure constants and elimination.
///
/// Exact fields report zero only for true zeros. Floating point fields
/// override [`Scalar::is_negligible`] with a tolerance, which makes every
/// rank decision approximate.
pub trait Scalar:
    Num + Clone + Neg<Output = Self> + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True when elimination treats `self` as zero.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_i64(v: i64) -> Self;

    /// Parses `"p"` or `"p/q"` with integer `p`, `q`; decimals are rejected.
    fn parse_exact(s: &str) -> Option<Self>;

    /// Whether zero tests are exact.
    fn is_exact() -> bool {
        true
    }
}

fn split_fraction(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    let valid_int = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    if !valid_int(p) || !valid_int(q) || q.starts_with('-') {
        return None;
    }
    let p = BigInt::from_str(p).ok()?;
    let q = BigInt::from_str(q).ok()?;
    if q.is_zero() {
        return None;
    }
    Some((p, q))
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let (p, q) = split_fraction(s)?;
        Some(BigRational::new(p, q))
    }
}

/// Absolute tolerance used by the `f64` instance.
pub const F64_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < F64_TOLERANCE
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let r = BigRational::parse_exact(s)?;
        let p: f64 = r.numer().to_string().parse().ok()?;
        let q: f64 = r.denom().to_string().parse().ok()?;
        Some(p / q)
    }

    fn is_exact() -> bool {
        false
    }
}

/// Canonical text for a rational: `"p"` or `"p/q"` in lowest terms.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
