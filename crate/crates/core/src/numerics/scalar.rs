//! Scalar backends: exact big rationals and `f64`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational.
pub type Rational = BigRational;

/// Field operations shared by both backends.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for the rational backend.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Only the float backend accepts values of transcendental origin.
    fn from_float(v: f64) -> Result<Self>;

    /// Integer power, negative exponents allowed.
    fn powi(&self, e: i64) -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn sqrt(&self) -> Result<Self>;
    fn exp(&self) -> Result<Self>;
    fn powf(&self, e: &Self) -> Result<Self>;

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_int(v as i64)
    }

    /// Equality for exact values, `|a - b| <= tol` otherwise.
    fn close(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_float(v: f64) -> Result<Self> {
        Ok(v)
    }
    fn powi(&self, e: i64) -> Self {
        if e.unsigned_abs() <= i32::MAX as u64 {
            f64::powi(*self, e as i32)
        } else {
            f64::powf(*self, e as f64)
        }
    }
    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::Domain(format!("sqrt of negative value {self}")));
        }
        Ok(f64::sqrt(*self))
    }
    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }
    fn powf(&self, e: &Self) -> Result<Self> {
        Ok(f64::powf(*self, *e))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_float(v: f64) -> Result<Self> {
        Err(Error::Transcendental(format!("float value {v} in exact arithmetic")))
    }
    fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            num_traits::pow(self.clone(), e as usize)
        } else {
            num_traits::pow(self.recip(), e.unsigned_abs() as usize)
        }
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain(format!("sqrt of negative value {self}")));
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Ok(Rational::new(n, d))
        } else {
            Err(Error::Transcendental(format!("sqrt({self}) is irrational")))
        }
    }
    fn exp(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::one());
        }
        Err(Error::Transcendental(format!("exp({self})")))
    }
    fn powf(&self, e: &Self) -> Result<Self> {
        if e.is_integer() {
            if let Some(k) = e.to_integer().to_i64() {
                return Ok(Scalar::powi(self, k));
            }
        }
        Err(Error::Transcendental(format!("({self})^({e})")))
    }
}

/// Correctly scaled conversion that survives huge numerators and denominators.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // fall back to scaling by bit lengths
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        Rational::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        Rational::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let m = ToPrimitive::to_f64(&scaled).unwrap_or(0.0);
    m * 2f64.powi(shift.clamp(-1100, 1100) as i32)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q`, integers and finite decimals (`0.25`, `-1.5e-3`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| err())?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac_part.len() as i64;
    let ten = rat(10, 1);
    let mut v = Rational::from_integer(digits) * Scalar::powi(&ten, scale);
    if neg {
        v = -v;
    }
    Ok(v)
}

/// Formats a rational as `num/den`, or `num` when integral.
pub fn format_rational(r: &Rational) -> String {
    format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), rat(-3, 20));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn tiny_rationals_convert() {
        let tiny = Scalar::powi(&rat(1, 2), 1070);
        let v = rational_to_f64(&tiny);
        assert!(v >= 0.0 && v < 1e-300);
        let huge_ratio = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(2) << 2000usize);
        assert_eq!(rational_to_f64(&huge_ratio), 1.5);
    }

    #[test]
    fn exact_sqrt_of_squares() {
        assert_eq!(Scalar::sqrt(&rat(9, 4)).unwrap(), rat(3, 2));
        assert!(matches!(Scalar::sqrt(&rat(1, 2)), Err(Error::Transcendental(_))));
    }
}
