//! Scalar abstraction and compensated summation.
//!
//! Every evaluator in this crate is generic over [`Scalar`], a floating-point
//! type with enough surface to write the closed forms once. `f32` and `f64`
//! both qualify; the crate-root aliases pin `f64`, which is what the regret
//! series need at T up to 10^8.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used throughout the crate.
///
/// `of` and `as_f64` exist so literals and counters can cross in and out of the
/// generic code without sprinkling `from_f64(...).unwrap()` everywhere.
pub trait Scalar:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` literal. Rounds for `f32`.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    /// Conversion from a step or cycle count. Exact until the mantissa runs out.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).unwrap_or_else(|| Self::of(n as f64))
    }

    /// Widening view for error payloads and serialization contexts.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Neumaier-compensated accumulator.
///
/// The finite evaluators sum up to 10^8 terms of mixed sign; the compensation
/// keeps the result within a few ulps of the exact sum instead of drifting by
/// O(n) ulps.
#[derive(Debug, Clone, Copy)]
pub struct KahanSum<S> {
    sum: S,
    compensation: S,
}

impl<S: Scalar> KahanSum<S> {
    pub fn new() -> Self {
        KahanSum { sum: S::zero(), compensation: S::zero() }
    }

    pub fn add(&mut self, x: S) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> S {
        self.sum + self.compensation
    }

    pub fn sum_iter<I: IntoIterator<Item = S>>(items: I) -> S {
        let mut acc = Self::new();
        for x in items {
            acc.add(x);
        }
        acc.total()
    }
}

impl<S: Scalar> Default for KahanSum<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> AddAssign<S> for KahanSum<S> {
    fn add_assign(&mut self, x: S) {
        self.add(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survives_catastrophic_cancellation() {
        let mut acc = KahanSum::<f64>::new();
        acc.add(1.0);
        acc.add(1e200);
        acc.add(1.0);
        acc.add(-1e200);
        assert_eq!(acc.total(), 2.0);
    }

    #[test]
    fn beats_naive_summation_on_small_terms() {
        let n = 1_000_000u64;
        let x = 0.1f64;
        let mut naive = 0.0f64;
        let mut comp = KahanSum::new();
        for _ in 0..n {
            naive += x;
            comp.add(x);
        }
        let exact = x * n as f64;
        assert!((comp.total() - exact).abs() <= (naive - exact).abs());
        assert!((comp.total() - exact).abs() < 1e-7);
    }

    #[test]
    fn generic_over_f32() {
        let total = KahanSum::<f32>::sum_iter([1.0f32, 2.0, 3.0]);
        assert_eq!(total, 6.0);
        assert_eq!(<f32 as Scalar>::of(0.5), 0.5f32);
        assert_eq!(<f64 as Scalar>::from_count(7), 7.0);
    }
}
