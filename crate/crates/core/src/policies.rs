//! Forecaster policies: softmax weights over cumulative gains and the closed
//! lag-mass forms for team-structured gain states.
//!
//! With cumulative gains `G` and learning rate `eta`, the forecaster plays
//! expert `i` with probability proportional to `exp(eta * G_i)`. All forms
//! here are computed through `exp(-eta * d)` with `d >= 0` so that no
//! intermediate overflows: large gaps saturate cleanly to 0/1 masses.

use crate::domain::{EtaSchedule, GainLedger, RateMixture};
use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Scalar};

/// A probability distribution over experts.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector<S>(Vec<S>);

impl<S: Scalar> ProbabilityVector<S> {
    /// Validating constructor: entries in `[0, 1]` and unit total, both within
    /// [`crate::domain::WEIGHT_TOL`].
    pub fn new(probs: Vec<S>) -> Result<Self> {
        let tol = S::of(crate::domain::WEIGHT_TOL);
        for (i, p) in probs.iter().enumerate() {
            if !p.is_finite() || *p < -tol || *p > S::one() + tol {
                return Err(Error::BadDistribution {
                    detail: format!("entry {i} = {p} outside [0, 1]"),
                });
            }
        }
        let total = KahanSum::sum_iter(probs.iter().copied());
        if (total - S::one()).abs() > tol {
            return Err(Error::BadDistribution {
                detail: format!("probabilities sum to {total}, not 1"),
            });
        }
        Ok(ProbabilityVector(probs))
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<S> {
        self.0
    }

    /// Total mass on an index set, summed with compensation.
    pub fn mass_on<I: IntoIterator<Item = usize>>(&self, indices: I) -> S {
        KahanSum::sum_iter(indices.into_iter().map(|i| self.0[i]))
    }
}

impl<S> std::ops::Index<usize> for ProbabilityVector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// Softmax of cumulative gains at rate `eta`, with the maximum subtracted
/// before exponentiation. Gain levels are integers, so the subtraction is
/// exact and the weights are invariant under shifting all gains by a
/// constant — bit for bit, not merely up to rounding.
pub fn mwa_weights<S: Scalar>(ledger: &GainLedger, eta: S) -> ProbabilityVector<S> {
    let top = ledger.max_gain();
    let mut raw: Vec<S> = ledger
        .gains
        .iter()
        .map(|&g| (-eta * S::from_count(top - g)).exp())
        .collect();
    let total = KahanSum::sum_iter(raw.iter().copied());
    for w in &mut raw {
        *w /= total;
    }
    ProbabilityVector(raw)
}

/// Expert distribution played at step `step` under a schedule family. For the
/// random family this is the expected softmax over the rate support
/// (draw-then-play), which is what the adversary faces in expectation.
pub fn policy_probabilities<S: Scalar>(
    ledger: &GainLedger,
    sched: &EtaSchedule<S>,
    step: u64,
) -> Result<ProbabilityVector<S>> {
    ledger.validate_at(step)?;
    match sched.mixture_at(step)? {
        RateMixture::One(eta) => Ok(mwa_weights(ledger, eta)),
        RateMixture::Weighted(support) => {
            let mut acc = vec![KahanSum::<S>::new(); ledger.num_experts()];
            for rw in support {
                let w = mwa_weights(ledger, rw.rate);
                for (a, p) in acc.iter_mut().zip(w.as_slice()) {
                    a.add(rw.weight * *p);
                }
            }
            Ok(ProbabilityVector(acc.into_iter().map(|a| a.total()).collect()))
        }
    }
}

/// Mass on the upper team when `upper` experts sit `gap` levels above the
/// remaining `lower` experts: `a / (a + b * exp(-eta * gap))`.
pub fn team_correct_prob<S: Scalar>(upper: u32, lower: u32, gap: u64, eta: S) -> S {
    let a = S::of(upper as f64);
    let b = S::of(lower as f64);
    let shrink = (-eta * S::from_count(gap)).exp();
    a / (a + b * shrink)
}

/// Mass on the lower team in the same state, computed directly so that tiny
/// lag masses keep full relative accuracy instead of cancelling against 1.
pub fn team_lag_prob<S: Scalar>(upper: u32, lower: u32, gap: u64, eta: S) -> S {
    let a = S::of(upper as f64);
    let b = S::of(lower as f64);
    let shrink = (-eta * S::from_count(gap)).exp();
    b * shrink / (a + b * shrink)
}

/// Two experts (or two equal teams) at gap `d`: mass on the lagging side,
/// `1 / (exp(eta * d) + 1)`.
pub fn two_expert_lag_prob<S: Scalar>(gap: u64, eta: S) -> S {
    team_lag_prob(1, 1, gap, eta)
}

/// One leader against `k - 1` tied laggers: their combined mass
/// `(k - 1) / (exp(eta * d) + k - 1)`.
pub fn straight_lag_prob<S: Scalar>(gap: u64, eta: S, k: u32) -> S {
    team_lag_prob(1, k - 1, gap, eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{GainLedger, RateDist, RateWeight};
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn doubling_rate_on_three_point_lead() {
        let w = mwa_weights(&GainLedger::new(vec![3, 0]), std::f64::consts::LN_2);
        assert!(close(w[0], 8.0 / 9.0));
        assert!(close(w[1], 1.0 / 9.0));
    }

    #[test]
    fn unit_rate_unit_gap_is_logistic() {
        let w = mwa_weights(&GainLedger::new(vec![1, 0]), 1.0f64);
        assert!(close(w[0], 0.7310585786300049));
        assert!(close(w[1], 0.2689414213699951));
        assert!(close(two_expert_lag_prob(1, 1.0), 0.2689414213699951));
    }

    #[test]
    fn zero_rate_is_uniform() {
        let w = mwa_weights(&GainLedger::new(vec![7, 0, 3, 3]), 0.0f64);
        for &p in w.as_slice() {
            assert!(close(p, 0.25));
        }
    }

    #[test]
    fn mixture_of_zero_and_doubling_rates() {
        let sched: crate::EtaSchedule = EtaSchedule::Random {
            rate_dist: RateDist::Stationary {
                support: vec![
                    RateWeight { rate: 0.0, weight: 0.5 },
                    RateWeight { rate: std::f64::consts::LN_2, weight: 0.5 },
                ],
            },
        };
        let w = policy_probabilities(&GainLedger::new(vec![3, 0]), &sched, 4).unwrap();
        assert!(close(w[0], 25.0 / 36.0));
        assert!(close(w[1], 11.0 / 36.0));
    }

    #[test]
    fn tied_teams_split_by_size() {
        assert_eq!(team_correct_prob(4, 3, 0, 0.7f64), 4.0 / 7.0);
        assert_eq!(team_lag_prob(3, 4, 0, 0.7f64), 4.0 / 7.0);
    }

    #[test]
    fn straight_form_matches_direct_softmax() {
        let (k, gap, eta) = (5u32, 3u64, 0.4f64);
        let mut gains = vec![gap; 1];
        gains.resize(k as usize, 0);
        let w = mwa_weights(&GainLedger::new(gains), eta);
        let lag: f64 = w.as_slice()[1..].iter().sum();
        assert!(close(straight_lag_prob(gap, eta, k), lag));
        assert!(close(team_correct_prob(1, k - 1, gap, eta), w[0]));
    }

    #[test]
    fn huge_gaps_saturate_without_nan() {
        let p = straight_lag_prob::<f64>(1_000_000, 2.0, 10);
        assert_eq!(p, 0.0);
        assert_eq!(team_correct_prob::<f64>(1, 9, 1_000_000, 2.0), 1.0);
        let q = two_expert_lag_prob::<f64>(700, 1.0);
        assert!(q > 0.0 && q < 1e-300);
    }

    #[test]
    fn lag_prob_grid_is_decreasing_in_gap() {
        for &eta in &[0.05f64, 0.3, 1.0, 2.5] {
            for k in [2u32, 3, 7] {
                let p: Vec<f64> = (0..30).map(|d| straight_lag_prob(d, eta, k)).collect();
                for w in p.windows(2) {
                    assert!(w[1] < w[0], "eta={eta} k={k}");
                }
            }
        }
    }

    /// The two-expert lag mass is convex on `d >= 0`; for k > 2 convexity
    /// only kicks in past `ln(k - 1) / eta`, so it is not asserted there.
    #[test]
    fn two_expert_lag_prob_is_convex_in_gap() {
        for &eta in &[0.05f64, 0.3, 1.0, 2.5] {
            let p: Vec<f64> = (0..30).map(|d| two_expert_lag_prob(d, eta)).collect();
            for w in p.windows(3) {
                assert!(w[0] - w[1] >= w[1] - w[2] - 1e-15, "eta={eta}");
            }
        }
    }

    #[test]
    fn validating_constructor_rejects_bad_vectors() {
        assert!(ProbabilityVector::new(vec![0.5f64, 0.5]).is_ok());
        assert!(ProbabilityVector::new(vec![0.5f64, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5f64, -0.5]).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(
            gains in proptest::collection::vec(0u64..60, 2..8),
            eta in 0.0f64..4.0,
        ) {
            let w = mwa_weights(&GainLedger::new(gains), eta);
            let total: f64 = w.as_slice().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(ProbabilityVector::new(w.into_inner()).is_ok());
        }

        #[test]
        fn weights_are_shift_invariant_bitwise(
            gains in proptest::collection::vec(0u64..40, 2..6),
            shift in 0u64..1000,
            eta in 0.0f64..3.0,
        ) {
            let base = mwa_weights(&GainLedger::new(gains.clone()), eta);
            let shifted_gains: Vec<u64> = gains.iter().map(|g| g + shift).collect();
            let shifted = mwa_weights(&GainLedger::new(shifted_gains), eta);
            prop_assert_eq!(base.as_slice(), shifted.as_slice());
        }

        #[test]
        fn team_masses_are_complementary(
            upper in 1u32..6,
            lower in 1u32..6,
            gap in 0u64..50,
            eta in 0.0f64..3.0,
        ) {
            let c = team_correct_prob(upper, lower, gap, eta);
            let l = team_lag_prob(upper, lower, gap, eta);
            prop_assert!((c + l - 1.0).abs() < 1e-14);
        }
    }
}
