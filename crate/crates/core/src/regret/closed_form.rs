//! Closed-form and fast-path regret evaluators.
//!
//! Finite horizon: the loop-then-straight formula (any balanced split, any
//! schedule family) and the mean-regret reductions for the randomized
//! loop-then-straight families, with three evaluation strategies keyed to
//! the schedule's shape — O(l) for time-invariant schedules, O(l * pieces +
//! R) counting for piecewise-constant ones, and a work-capped double loop
//! otherwise (R is the number of loop counts in the support).
//!
//! Geometric horizon: exact closed forms for looping and straight-then-loop
//! play, and a truncated series with an analytic tail bound for pure
//! straight play. All mass expressions go through `exp(-eta * d)` so large
//! gaps saturate instead of overflowing, and near-cancelling differences
//! are rearranged into sums of positive terms.

use crate::adversaries::TeamSplit;
use crate::domain::{EtaSchedule, Horizon, RatePiece, RegretReport};
use crate::error::{Error, Result};
use crate::policies::{straight_lag_prob, team_lag_prob};
use crate::scalar::{KahanSum, Scalar};

/// Work cap for the general-schedule double loop in the randomized-family
/// mean: beyond this many (loop count, straight step) pairs the evaluator
/// refuses rather than silently taking minutes.
pub const GENERAL_WORK_CAP: u64 = 100_000_000;

// ---------------------------------------------------------------------------
// Finite horizon
// ---------------------------------------------------------------------------

/// Regret of one full loop cycle whose decrement lands on step `step`:
/// tie-advance value minus the expected lagging-team mass at gap 1.
pub(crate) fn cycle_value_at<S: Scalar>(
    sched: &EtaSchedule<S>,
    split: TeamSplit,
    step: u64,
) -> Result<S> {
    let (a, b) = (split.team_a, split.team_b);
    let tie = S::of(b as f64) / S::of((a + b) as f64);
    let dec = sched.mixture_at(step)?.expect(|eta| team_lag_prob(a, b, 1, eta));
    Ok(tie - dec)
}

/// Expected regret of a straight step taken at gap `d` on step `step`.
pub(crate) fn straight_value_at<S: Scalar>(
    sched: &EtaSchedule<S>,
    k: u32,
    d: u64,
    step: u64,
) -> Result<S> {
    Ok(sched.mixture_at(step)?.expect(|eta| straight_lag_prob(d, eta, k)))
}

/// Exact expected regret of the loop-then-straight script: `(T - l)/2` loop
/// cycles, then `l` straight steps, under the balanced split for `k`.
///
/// Equals the step-by-step evaluation of the same script for every schedule
/// family; for time-invariant schedules the loop sum collapses to a single
/// multiplication.
pub fn lsdet_regret_formula<S: Scalar>(
    t: u64,
    straight_len: u64,
    sched: &EtaSchedule<S>,
    k: u32,
) -> Result<RegretReport<S>> {
    if t == 0 {
        return Err(Error::BadHorizon { detail: "loop-then-straight needs T >= 1".into() });
    }
    sched.validate()?;
    let split = TeamSplit::balanced(k)?;
    if straight_len > t {
        return Err(Error::BadLength {
            detail: format!("straight length {straight_len} exceeds horizon {t}"),
        });
    }
    if (t - straight_len) % 2 != 0 {
        return Err(Error::ParityError { t, straight_len });
    }
    let cycles = (t - straight_len) / 2;

    let loop_part = if sched.is_time_invariant() {
        S::from_count(cycles) * cycle_value_at(sched, split, 1)?
    } else {
        let mut acc = KahanSum::new();
        for i in 1..=cycles {
            acc.add(cycle_value_at(sched, split, 2 * i)?);
        }
        acc.total()
    };

    let mut straight = KahanSum::new();
    let invariant = sched.is_time_invariant();
    for d in 0..straight_len {
        let step = if invariant { 1 } else { t - straight_len + d + 1 };
        straight.add(straight_value_at(sched, k, d, step)?);
    }

    Ok(RegretReport::from_parts(
        loop_part,
        straight.total(),
        &Horizon::Finite { steps: t },
        S::zero(),
    ))
}

/// Constant-rate loop-then-straight regret for an odd expert count with the
/// `(m, m + 1)` split.
pub fn odd_lsdet_regret_formula<S: Scalar>(
    t: u64,
    straight_len: u64,
    eta: S,
    k: u32,
) -> Result<RegretReport<S>> {
    if k % 2 == 0 {
        return Err(Error::EvenK { k });
    }
    lsdet_regret_formula(t, straight_len, &EtaSchedule::single(eta), k)
}

/// Number of terms of the arithmetic progression `first, first + stride, ...`
/// (of length `count`) that land in `[lo, hi]`.
fn progression_count(first: u64, stride: u64, count: u64, lo: u64, hi: u64) -> u64 {
    if count == 0 || hi < first {
        return 0;
    }
    let j_hi = ((hi - first) / stride).min(count - 1);
    let j_lo = if lo <= first { 0 } else { (lo - first).div_ceil(stride) };
    if j_lo > j_hi {
        0
    } else {
        j_hi - j_lo + 1
    }
}

/// Inclusive step range covered by piece `idx` of a validated piecewise rule.
fn piece_range<S>(pieces: &[RatePiece<S>], idx: usize) -> (u64, u64) {
    let lo = pieces[idx].from_step;
    let hi = pieces.get(idx + 1).map(|p| p.from_step - 1).unwrap_or(u64::MAX);
    (lo, hi)
}

/// Mean regret of the randomized loop-then-straight family: loop count
/// `j` uniform on `{0, ..., loop_max - 1}`, a fair coin deciding a leading
/// idle step, `straight_len` straight steps, idle padding to `t`.
pub(crate) fn lsrand_mean<S: Scalar>(
    t: u64,
    straight_len: u64,
    loop_max: u64,
    sched: &EtaSchedule<S>,
    split: TeamSplit,
) -> Result<RegretReport<S>> {
    sched.validate()?;
    let k = split.num_experts();
    let r_count = loop_max;
    let horizon = Horizon::Finite { steps: t };
    let two_r = S::from_count(2 * r_count);

    if sched.is_time_invariant() {
        // Every script sees the same cycle and straight values; the loop
        // count averages to (R - 1)/2 cycles.
        let cyc = cycle_value_at(sched, split, 1)?;
        let loop_mean = cyc * S::from_count(r_count - 1) / S::of(2.0);
        let mut straight = KahanSum::new();
        for d in 0..straight_len {
            straight.add(straight_value_at(sched, k, d, 1)?);
        }
        return Ok(RegretReport::from_parts(loop_mean, straight.total(), &horizon, S::zero()));
    }

    // Cycle i of a heads script decrements on step 2i; of a tails script on
    // step 2i + 1. It appears in every script with loop count j >= i, i.e.
    // with multiplicity R - i per coin side.
    let mut loop_total = KahanSum::new();
    for i in 1..r_count {
        let mult = S::from_count(r_count - i);
        loop_total.add(mult * cycle_value_at(sched, split, 2 * i)?);
        loop_total.add(mult * cycle_value_at(sched, split, 2 * i + 1)?);
    }
    let loop_mean = loop_total.total() / two_r;

    let straight_mean = if let Some(pieces) = sched.piecewise_view() {
        // Straight step at gap d lands on step 2j + d + 1 (heads) or
        // 2j + d + 2 (tails); count how many j hit each constant piece.
        let mut total = KahanSum::new();
        for d in 0..straight_len {
            for idx in 0..pieces.len() {
                let (lo, hi) = piece_range(&pieces, idx);
                let hits = progression_count(d + 1, 2, r_count, lo, hi)
                    + progression_count(d + 2, 2, r_count, lo, hi);
                if hits > 0 {
                    total.add(S::from_count(hits) * straight_lag_prob(d, pieces[idx].rate, k));
                }
            }
        }
        total.total() / two_r
    } else {
        let work = r_count.saturating_mul(straight_len);
        if work > GENERAL_WORK_CAP {
            return Err(Error::TooLarge { limit: GENERAL_WORK_CAP, requested: work });
        }
        let mut total = KahanSum::new();
        for j in 0..r_count {
            for d in 0..straight_len {
                total.add(straight_value_at(sched, k, d, 2 * j + d + 1)?);
                total.add(straight_value_at(sched, k, d, 2 * j + d + 2)?);
            }
        }
        total.total() / two_r
    };

    Ok(RegretReport::from_parts(loop_mean, straight_mean, &horizon, S::zero()))
}

/// Regret of pure looping over steps `offset + 1 ..= t`: full cycles plus a
/// rate-independent tie-advance if the span is odd.
pub(crate) fn pure_loop_value<S: Scalar>(
    t: u64,
    offset: u64,
    sched: &EtaSchedule<S>,
    split: TeamSplit,
) -> Result<S> {
    let span = t - offset;
    let cycles = span / 2;
    let tie = S::of(split.team_b as f64) / S::of(split.num_experts() as f64);
    let full = if sched.is_time_invariant() {
        S::from_count(cycles) * cycle_value_at(sched, split, 1)?
    } else {
        let mut acc = KahanSum::new();
        for i in 1..=cycles {
            acc.add(cycle_value_at(sched, split, offset + 2 * i)?);
        }
        acc.total()
    };
    Ok(if span % 2 != 0 { full + tie } else { full })
}

/// Mean regret of the looping-mixture family: weight `mix_p` on the
/// randomized loop-then-straight family, `(1 - mix_p)/2` on each pure
/// looping variant.
pub(crate) fn lsrandpp_mean<S: Scalar>(
    t: u64,
    straight_len: u64,
    loop_max: u64,
    mix_p: f64,
    sched: &EtaSchedule<S>,
    split: TeamSplit,
) -> Result<RegretReport<S>> {
    let base = lsrand_mean(t, straight_len, loop_max, sched, split)?;
    let p = S::of(mix_p);
    let half_rest = (S::one() - p) / S::of(2.0);
    let loops = pure_loop_value(t, 0, sched, split)? + pure_loop_value(t, 1, sched, split)?;
    Ok(RegretReport::from_parts(
        p * base.loop_part + half_rest * loops,
        p * base.straight_part,
        &Horizon::Finite { steps: t },
        S::zero(),
    ))
}

// ---------------------------------------------------------------------------
// Geometric horizon
// ---------------------------------------------------------------------------

fn check_delta<S: Scalar>(delta: S) -> Result<()> {
    let d = delta.as_f64();
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::BadDelta { delta: d });
    }
    Ok(())
}

fn check_eta<S: Scalar>(eta: S) -> Result<()> {
    if eta < S::zero() || !eta.is_finite() {
        return Err(Error::NegativeRate { rate: eta.as_f64() });
    }
    Ok(())
}

/// Exact regret of perpetual looping under stopping probability `delta`,
/// with step `t` weighted `(1 - delta)^t`:
/// `(1-d)/(d(2-d)) * [c1 - (1-d) c2]`, where `c1` is the tie-advance value
/// and `c2` the lagging-team mass at gap 1. The bracket is evaluated as
/// `a*b*(1 - e^{-eta}) / ((a+b)(a + b e^{-eta})) + delta * b e^{-eta} / (a +
/// b e^{-eta})` — all positive terms, no cancellation as `delta, eta -> 0`.
pub fn geometric_loop_regret<S: Scalar>(delta: S, eta: S, k: u32) -> Result<RegretReport<S>> {
    check_delta(delta)?;
    check_eta(eta)?;
    let split = TeamSplit::balanced(k)?;
    let (a, b) = (S::of(split.team_a as f64), S::of(split.team_b as f64));
    let w = (-eta).exp();
    let em = -(-eta).exp_m1();
    let denom = a + b * w;
    let bracket = a * b * em / ((a + b) * denom) + delta * b * w / denom;
    let one_m = S::one() - delta;
    let value = one_m / (delta * (S::of(2.0) - delta)) * bracket;
    Ok(RegretReport::from_parts(
        value,
        S::zero(),
        &Horizon::Geometric { stop_prob: delta },
        S::zero(),
    ))
}

/// Truncated series regret of perpetual straight-line play:
/// `sum_d (1-delta)^{d+1} (k-1)/(e^{eta d} + k - 1)`, cut once the analytic
/// tail bound `(1-delta)^{D+2}/delta * s_{D+1}` drops below `tail_tol`; that
/// bound is reported as `truncation_bound`.
pub fn geometric_straight_regret<S: Scalar>(
    delta: S,
    eta: S,
    k: u32,
    tail_tol: S,
) -> Result<RegretReport<S>> {
    check_delta(delta)?;
    check_eta(eta)?;
    TeamSplit::balanced(k)?;
    if !(tail_tol > S::zero()) {
        return Err(Error::NonPositiveTolerance { tol: tail_tol.as_f64() });
    }
    let horizon = Horizon::Geometric { stop_prob: delta };
    if delta == S::one() {
        return Ok(RegretReport::from_parts(S::zero(), S::zero(), &horizon, S::zero()));
    }
    let lg = (-delta).ln_1p();
    let mut total = KahanSum::new();
    let mut d = 0u64;
    let bound = loop {
        total.add((S::from_count(d + 1) * lg).exp() * straight_lag_prob(d, eta, k));
        let next = straight_lag_prob(d + 1, eta, k);
        let bound = (S::from_count(d + 2) * lg).exp() / delta * next;
        if bound <= tail_tol {
            break bound;
        }
        d += 1;
    };
    Ok(RegretReport::from_parts(S::zero(), total.total(), &horizon, bound))
}

/// Exact regret of two-expert straight-then-loop play: `l` straight steps,
/// then the gap loops `l <-> l + 1` forever. `None` is the pure-straight
/// endpoint, delegated to the truncated series with `tail_tol`.
///
/// The loop tail is `(1-d)^{l+1} [1/A - (1-d)/B] / (d (2-d))` with
/// `A = tau^l + 1`, `B = tau^{l+1} + 1`; written over `u = e^{-eta l}`,
/// `v = e^{-eta(l+1)}` the bracket becomes
/// `[u (1 - e^{-eta}) + delta v (1 + u)] / ((1+u)(1+v))`, cancellation- and
/// overflow-free.
pub fn geometric_sl_regret<S: Scalar>(
    delta: S,
    eta: S,
    straight_len: Option<u64>,
    tail_tol: S,
) -> Result<RegretReport<S>> {
    let l = match straight_len {
        None => return geometric_straight_regret(delta, eta, 2, tail_tol),
        Some(l) => l,
    };
    check_delta(delta)?;
    check_eta(eta)?;
    let horizon = Horizon::Geometric { stop_prob: delta };
    if delta == S::one() {
        return Ok(RegretReport::from_parts(S::zero(), S::zero(), &horizon, S::zero()));
    }
    let lg = (-delta).ln_1p();

    let mut prefix = KahanSum::new();
    for d in 0..l {
        let wd = (-eta * S::from_count(d)).exp();
        prefix.add((S::from_count(d + 1) * lg).exp() * wd / (S::one() + wd));
    }

    let u = (-eta * S::from_count(l)).exp();
    let v = (-eta * S::from_count(l + 1)).exp();
    let em = -(-eta).exp_m1();
    let bracket = (u * em + delta * v * (S::one() + u)) / ((S::one() + u) * (S::one() + v));
    let tail = (S::from_count(l + 1) * lg).exp() * bracket
        / (delta * (S::of(2.0) - delta));

    Ok(RegretReport::from_parts(tail, prefix.total(), &horizon, S::zero()))
}
