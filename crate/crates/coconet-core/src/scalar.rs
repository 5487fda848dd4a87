//! Scalar abstractions for the numeric kernels.
//!
//! Edge weights are accumulated generically so the projection can run in
//! exact rational arithmetic while everything downstream runs on floats.

use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

/// Scalar usable as a graph edge weight. Implemented by `Ratio<i128>`
/// (exact) and by f32/f64.
pub trait WeightScalar:
    Copy
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Display
    + Debug
    + 'static
{
    /// 1/(n_k - 1), the contribution of one co-listed item with out-degree n_k.
    fn inverse_count(count: usize) -> Self {
        Self::one() / Self::from_usize(count).expect("count fits in weight scalar")
    }
}

impl<T> WeightScalar for T where
    T: Copy
        + PartialOrd
        + Zero
        + One
        + Add<Output = Self>
        + AddAssign
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Div<Output = Self>
        + FromPrimitive
        + ToPrimitive
        + Display
        + Debug
        + 'static
{
}

/// Floating-point scalar for distances, p-values, scores, and regressions.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + AddAssign + Sum<Self> + Display + Debug + Default + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to Real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + Sum<Self>
        + Display
        + Debug
        + Default
        + 'static
{
}
