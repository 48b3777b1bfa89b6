//! Coefficient rings: complex doubles for transports, exact rationals for ideals.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type C64 = num_complex::Complex64;

/// Relative pruning threshold for inexact scalars.
pub const PRUNE_RELATIVE: f64 = 1e-15;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Exact rings keep every nonzero coefficient.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn magnitude(&self) -> f64;

    /// Lossy conversion used when exact bases act on numeric data.
    fn to_complex(&self) -> C64;
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> C64 {
        *self
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// `1/k!` as a scalar.
pub fn inverse_factorial<S: Scalar>(k: usize) -> S {
    let mut out = S::one();
    for j in 2..=k {
        out = out * S::from_ratio(1, j as i64);
    }
    out
}
