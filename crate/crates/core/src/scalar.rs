//! Field abstraction so that Fock-space blocks can be built in `f64` or in
//! exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, NumAssign, Signed, ToPrimitive};
use std::fmt::Debug;
use std::ops::Neg;

use crate::error::{Error, Result};

pub trait Scalar:
    Clone + Debug + PartialEq + Num + NumAssign + Neg<Output = Self> + Send + Sync + 'static
{
    /// Exact conversion from a finite float.
    fn from_f64(x: f64) -> Result<Self>;

    fn from_i64(n: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::Domain(format!("non-finite value {x}")))
        }
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite value {x}")))
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

/// Rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
