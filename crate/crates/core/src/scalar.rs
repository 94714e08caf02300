//! Scalar fields used throughout the crate.
//!
//! Two modes exist: exact rationals ([`Rat`]) for combinatorial predicates
//! (rank, incidence, face lattices) and binary64 floats for metric
//! quantities. Every comparison goes through [`Scalar::sign`] or
//! [`Scalar::is_zero_tol`], which take an explicit tolerance; the rational
//! implementation ignores it.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational.
pub type Rat = BigRational;

/// Default float tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Signed + 'static {
    /// `true` for modes that never round.
    const EXACT: bool;

    fn from_rat(r: &Rat) -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Zero test; `tol` is absolute and only consulted in float mode.
    fn is_zero_tol(&self, tol: f64) -> bool;

    fn sign(&self, tol: f64) -> Ordering {
        if self.is_zero_tol(tol) {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }

    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Correctly scaled conversion; `BigRational::to_f64` overflows on huge
/// numerators even when the quotient is representable.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = n - d;
    let scaled = if shift > 0 {
        Rat::new(r.numer().clone(), r.denom().clone() << (shift as usize))
    } else {
        Rat::new(r.numer().clone() << ((-shift) as usize), r.denom().clone())
    };
    ToPrimitive::to_f64(&scaled).unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Exact rational from an `f64` (every finite float is a dyadic rational).
pub fn rat_from_f64(v: f64) -> Option<Rat> {
    Rat::from_float(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("floating point literal {0:?} is not allowed; write it as p/q")]
    FloatLiteral(String),
    #[error("invalid rational literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"`. Decimal points and exponents are rejected.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRatError::Empty);
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(ParseRatError::FloatLiteral(t.to_string()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| ParseRatError::Invalid(t.to_string()))?;
    let d = BigInt::from_str(den).map_err(|_| ParseRatError::Invalid(t.to_string()))?;
    if d.is_zero() {
        return Err(ParseRatError::ZeroDenominator(t.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -3 ").unwrap(), rat_int(-3));
        assert_eq!(parse_rat("4/-6").unwrap(), rat(-2, 3));
        assert_eq!(format_rat(&rat(6, 4)), "3/2");
        assert_eq!(format_rat(&rat_int(-7)), "-7");
        assert!(matches!(parse_rat("0.5"), Err(ParseRatError::FloatLiteral(_))));
        assert!(matches!(parse_rat("1e3"), Err(ParseRatError::FloatLiteral(_))));
        assert!(matches!(parse_rat("1/0"), Err(ParseRatError::ZeroDenominator(_))));
        assert!(matches!(parse_rat("abc"), Err(ParseRatError::Invalid(_))));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400u32);
        let r = Rat::new(big.clone() * BigInt::from(3), big);
        assert_eq!(rat_to_f64(&r), 3.0);
    }

    #[test]
    fn sign_respects_tolerance() {
        assert_eq!(1e-12f64.sign(1e-9), Ordering::Equal);
        assert_eq!((-1e-3f64).sign(1e-9), Ordering::Less);
        assert_eq!(rat(1, 1_000_000_000_000).sign(1.0), Ordering::Greater);
    }
}

/// The primitive integer vector on the same ray.
pub fn primitive(v: &[Rat]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
