//! Exact script evaluation through a reduced three-level state.
//!
//! Every script the adversary module can express keeps the experts in at
//! most three gain levels: the designated expert (team A's first member,
//! possibly holding a straight-line bonus), the rest of team A, and team B.
//! Tracking `(g_a, g_b, bonus)` therefore evaluates any script in O(1) state
//! per step, with benchmark increments decided by exact integer comparisons
//! and masses computed from integer level differences — no drift over long
//! horizons.

use crate::adversaries::{AdversaryScript, Segment, StepAction, TeamSplit};
use crate::domain::{EtaSchedule, GameConfig, RateMixture, RegretReport};
use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Scalar};

/// Reduced gain state: team levels plus the designated expert's bonus.
#[derive(Debug, Clone, Copy, Default)]
struct ReducedState {
    g_a: u64,
    g_b: u64,
    bonus: u64,
}

/// Probability masses on the three expert groups in a reduced state.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MassProfile<S> {
    pub team_a: S,
    pub team_b: S,
    pub designated: S,
}

fn masses_single_rate<S: Scalar>(state: ReducedState, split: TeamSplit, eta: S) -> MassProfile<S> {
    let lead = state.g_a + state.bonus;
    let top = lead.max(state.g_b);
    let w0 = (-eta * S::from_count(top - lead)).exp();
    let wa = if split.team_a > 1 {
        S::of((split.team_a - 1) as f64) * (-eta * S::from_count(top - state.g_a)).exp()
    } else {
        S::zero()
    };
    let wb = S::of(split.team_b as f64) * (-eta * S::from_count(top - state.g_b)).exp();
    let total = w0 + wa + wb;
    MassProfile { team_a: (w0 + wa) / total, team_b: wb / total, designated: w0 / total }
}

fn masses_at<S: Scalar>(
    state: ReducedState,
    split: TeamSplit,
    mixture: &RateMixture<'_, S>,
) -> MassProfile<S> {
    match mixture {
        RateMixture::One(eta) => masses_single_rate(state, split, *eta),
        RateMixture::Weighted(support) => {
            let mut acc =
                MassProfile { team_a: S::zero(), team_b: S::zero(), designated: S::zero() };
            for rw in *support {
                let m = masses_single_rate(state, split, rw.rate);
                acc.team_a += rw.weight * m.team_a;
                acc.team_b += rw.weight * m.team_b;
                acc.designated += rw.weight * m.designated;
            }
            acc
        }
    }
}

/// One step's regret contribution: benchmark increment minus the mass the
/// policy places on the advancing experts. Updates the state in place.
fn step_regret<S: Scalar>(
    state: &mut ReducedState,
    split: TeamSplit,
    action: StepAction,
    mixture: &RateMixture<'_, S>,
) -> S {
    match action {
        StepAction::Idle => S::zero(),
        StepAction::AdvanceTeamA => {
            let m = masses_at(*state, split, mixture);
            let bench = if state.g_a + state.bonus >= state.g_b { S::one() } else { S::zero() };
            state.g_a += 1;
            bench - m.team_a
        }
        StepAction::AdvanceTeamB => {
            let m = masses_at(*state, split, mixture);
            let bench = if state.g_b >= state.g_a + state.bonus { S::one() } else { S::zero() };
            state.g_b += 1;
            bench - m.team_b
        }
        StepAction::AdvanceLeaderSingle => {
            let m = masses_at(*state, split, mixture);
            let bench = if state.g_a + state.bonus >= state.g_b { S::one() } else { S::zero() };
            state.bonus += 1;
            bench - m.designated
        }
    }
}

fn check_script<S: Scalar>(script: &AdversaryScript, cfg: &GameConfig<S>) -> Result<u64> {
    let steps = cfg.horizon.finite_steps()?;
    if script.len() != steps {
        return Err(Error::LengthMismatch { script_len: script.len(), horizon: steps });
    }
    if script.num_experts() != cfg.num_experts {
        return Err(Error::BadExpertCount { k: script.num_experts() });
    }
    Ok(steps)
}

/// Exact expected regret of a finite script, with the loop/straight
/// decomposition taken from the script's own segment kinds (idle steps
/// contribute zero to either part).
pub fn exact_regret_script<S: Scalar>(
    script: &AdversaryScript,
    sched: &EtaSchedule<S>,
    cfg: &GameConfig<S>,
) -> Result<RegretReport<S>> {
    crate::domain::validate_config(cfg, sched)?;
    check_script(script, cfg)?;
    let split = script.split();
    let mut state = ReducedState::default();
    let mut loop_part = KahanSum::new();
    let mut straight_part = KahanSum::new();
    let mut t = 0u64;
    for &seg in script.segments() {
        let is_straight = matches!(seg, Segment::Straight { .. });
        let is_idle = matches!(seg, Segment::Idle { .. });
        for action in segment_actions(seg) {
            t += 1;
            if is_idle {
                continue;
            }
            let mixture = sched.mixture_at(t)?;
            let r = step_regret(&mut state, split, action, &mixture);
            if is_straight {
                straight_part.add(r);
            } else {
                loop_part.add(r);
            }
        }
    }
    Ok(RegretReport::from_parts(
        loop_part.total(),
        straight_part.total(),
        &cfg.horizon,
        S::zero(),
    ))
}

fn segment_actions(seg: Segment) -> impl Iterator<Item = StepAction> {
    (0..seg.step_count()).map(move |i| match seg {
        Segment::Loop { .. } => {
            if i % 2 == 0 {
                StepAction::AdvanceTeamA
            } else {
                StepAction::AdvanceTeamB
            }
        }
        Segment::HalfLoop => StepAction::AdvanceTeamA,
        Segment::Straight { .. } => StepAction::AdvanceLeaderSingle,
        Segment::Idle { .. } => StepAction::Idle,
    })
}

/// Per-step regret contributions of a finite script, in step order. Used by
/// the Monte Carlo sampler's prefix tables and by diagnostics.
pub fn step_regrets<S: Scalar>(
    script: &AdversaryScript,
    sched: &EtaSchedule<S>,
    cfg: &GameConfig<S>,
) -> Result<Vec<S>> {
    crate::domain::validate_config(cfg, sched)?;
    check_script(script, cfg)?;
    let split = script.split();
    let mut state = ReducedState::default();
    let mut out = Vec::with_capacity(script.len() as usize);
    for (i, action) in script.actions().enumerate() {
        let t = i as u64 + 1;
        if action == StepAction::Idle {
            out.push(S::zero());
            continue;
        }
        let mixture = sched.mixture_at(t)?;
        out.push(step_regret(&mut state, split, action, &mixture));
    }
    Ok(out)
}
