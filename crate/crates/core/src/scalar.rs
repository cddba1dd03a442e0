//! Numeric traits the exact kernels are generic over.
//!
//! Only exact types belong here: `BigInt`, `BigRational`, and machine
//! integers where overflow is ruled out by the caller's sizes.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Commutative ring with exact arithmetic.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Neg<Output = Self>
        + Send
        + Sync
{
}

/// Integral domain whose `Div` is exact whenever the quotient exists.
///
/// Fraction-free elimination only ever divides by a value known to divide
/// the numerator.
pub trait ExactDomain: Coefficient + Div<Output = Self> {}

impl<T: Coefficient + Div<Output = T>> ExactDomain for T {}

/// Field: every nonzero element is invertible and `Div` is true division.
pub trait Field: Coefficient + Div<Output = Self> {}

impl<T> Field for num_rational::Ratio<T>
where
    T: num_integer::Integer + Clone,
    num_rational::Ratio<T>: Coefficient,
{
}
