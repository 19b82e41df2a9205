//! Number types carried by measures and matrices.
//!
//! Two modes exist: exact arbitrary-precision rationals and `f64`. A single
//! computation is generic over one [`Scalar`] type, so the modes are never
//! mixed implicitly. Conversion happens only through [`Scalar::to_f64`] and
//! [`to_float_vec`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default cutoff below which a float weight is treated as zero.
pub const FLOAT_ZERO_THRESHOLD: f64 = 1e-14;

/// Tolerance on the total mass of a float measure.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self;

    /// Strictly positive mass. Exact mode ignores the threshold.
    fn is_positive_mass(&self, threshold: f64) -> bool;

    /// Equality up to `tol` (exact mode: identity).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// Rough storage footprint in bytes, used by the exact-power size guard.
    fn footprint(&self) -> usize;

    /// Whether a vector's total is acceptable as a probability mass.
    fn is_unit_mass(sum: &Self) -> bool;

    /// The exact rational value (floats are dyadic, so this is lossless).
    fn to_exact(&self) -> Rational;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_positive_mass(&self, _threshold: f64) -> bool {
        self.is_positive()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn footprint(&self) -> usize {
        ((self.numer().bits() + self.denom().bits()) / 8 + 16) as usize
    }

    fn is_unit_mass(sum: &Self) -> bool {
        sum.is_one()
    }

    fn to_exact(&self) -> Rational {
        self.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_positive_mass(&self, threshold: f64) -> bool {
        *self > threshold
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn footprint(&self) -> usize {
        8
    }

    fn is_unit_mass(sum: &Self) -> bool {
        (sum - 1.0).abs() <= FLOAT_MASS_TOLERANCE
    }

    fn to_exact(&self) -> Rational {
        Rational::from_float(*self).unwrap_or_else(Rational::zero)
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Parses `"num/den"` or an integer string into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let r = Rational::from_str(s.trim())
        .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(r)
}

pub fn to_float_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn sum<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone())
}
