//! Exact expected-regret evaluation for multiplicative-weights forecasters.
//!
//! The library models a sequential prediction game: `k` experts receive
//! binary gains, and a forecaster plays the softmax of cumulative gains at a
//! per-step learning rate drawn from a configurable schedule family. Against
//! this forecaster we evaluate structured adversaries — loop/straight gain
//! scripts, their randomized mixtures, and geometric-horizon variants — and
//! compute the exact expected regret, in closed form where one exists and by
//! direct evaluation otherwise.
//!
//! Everything numeric is generic over [`scalar::Scalar`] (any `f32`/`f64`-like
//! float); the crate root re-exports `f64`-concrete aliases for the common
//! case.

// Parity tests read more naturally as `% 2 == 0`, and the negated float
// comparisons are deliberate: `!(x > 0.0)` rejects NaN along with the
// out-of-range values.
#![allow(clippy::manual_is_multiple_of)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod scalar;

pub mod adversaries;
pub mod domain;
pub mod optimize;
pub mod policies;
pub mod regret;
pub mod rows;

pub use error::{Error, Result};
pub use rows::{ReportRow, CSV_HEADER};
pub use scalar::{KahanSum, Scalar};

/// Default scalar type for user-facing work.
pub type Real = f64;

/// [`domain::Horizon`] over [`Real`].
pub type Horizon = domain::Horizon<Real>;
/// [`domain::GameConfig`] over [`Real`].
pub type GameConfig = domain::GameConfig<Real>;
/// [`domain::EtaSchedule`] over [`Real`].
pub type EtaSchedule = domain::EtaSchedule<Real>;
/// [`domain::RateRule`] over [`Real`].
pub type RateRule = domain::RateRule<Real>;
/// [`domain::RateDist`] over [`Real`].
pub type RateDist = domain::RateDist<Real>;
/// [`domain::RegretReport`] over [`Real`].
pub type RegretReport = domain::RegretReport<Real>;
