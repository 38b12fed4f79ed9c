//! Best-response oracles: the exact optimal adversary against a fixed
//! two-expert policy.
//!
//! The adversary's whole decision reduces to the gap between the two
//! experts: push it up (regret `+p(d, t)`), pull it down (regret
//! `-p(d, t)`, only above zero), or idle. A finite horizon admits exact
//! backward dynamic programming over (step, gap); a geometric horizon
//! admits value iteration on the stationary gap process. Both return the
//! optimal regret, an optimal play, and a classification of its shape, so
//! tests can check not just the value but the structure of the maximizer.

use crate::domain::EtaSchedule;
use crate::error::{Error, Result};
use crate::policies::two_expert_lag_prob;
use crate::scalar::Scalar;

/// Largest finite horizon the quadratic DP accepts.
pub const DP_MAX_HORIZON: u64 = 5000;

/// Mass a two-expert policy puts on the trailing expert at gap `d` on step
/// `step` (at `d = 0` the experts are tied and the value is the mass on
/// either one, so it is 1/2 for any symmetric policy).
pub trait LagProbPolicy<S: Scalar> {
    fn lag_prob(&self, d: u64, step: u64) -> Result<S>;
}

/// Two-expert multiplicative-weights policy under any schedule family.
pub struct MwaPolicy<'a, S> {
    sched: &'a EtaSchedule<S>,
}

impl<'a, S: Scalar> MwaPolicy<'a, S> {
    pub fn new(sched: &'a EtaSchedule<S>) -> Result<Self> {
        sched.validate()?;
        Ok(MwaPolicy { sched })
    }
}

impl<S: Scalar> LagProbPolicy<S> for MwaPolicy<'_, S> {
    fn lag_prob(&self, d: u64, step: u64) -> Result<S> {
        Ok(self.sched.mixture_at(step)?.expect(|eta| two_expert_lag_prob(d, eta)))
    }
}

/// One move of the stationary optimal adversary at a given gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapAction {
    /// Advance the leader (or either expert at a tie): the gap grows.
    Up,
    /// Advance the trailer: the gap shrinks.
    Down,
}

/// The optimal play a best-response oracle found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptimalPlay {
    /// Gap after each step, starting with the initial tie (`gaps[0] = 0`).
    FinitePath { gaps: Vec<u64> },
    /// Chosen move at each gap `0..=d_max` of a stationary policy.
    StationaryActions { actions: Vec<GapAction> },
}

/// Shape classification of an optimal play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStructure {
    /// Oscillates at the bottom of the gap range (one parity-fixing stay at
    /// zero allowed), then climbs by one every remaining step.
    LoopThenStraight { straight_len: u64 },
    /// Climbs while below `threshold`, then alternates `threshold - 1 <->
    /// threshold` forever.
    StraightThenLoop { threshold: u64 },
    Other,
}

/// Result of a best-response computation.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseResult<S> {
    pub regret: S,
    pub play: OptimalPlay,
    pub structure: PathStructure,
}

fn checked_lag_prob<S: Scalar, P: LagProbPolicy<S>>(
    policy: &P,
    d: u64,
    step: u64,
) -> Result<S> {
    let p = policy.lag_prob(d, step)?;
    let v = p.as_f64();
    if !(0.0..=0.5 + 1e-12).contains(&v) {
        return Err(Error::BadProbability { p: v });
    }
    Ok(p)
}

const CODE_UP: u8 = 0;
const CODE_STAY: u8 = 1;
const CODE_DOWN: u8 = 2;

fn set_code(buf: &mut [u8], idx: usize, code: u8) {
    let shift = (idx % 4) * 2;
    buf[idx / 4] = (buf[idx / 4] & !(0b11 << shift)) | (code << shift);
}

fn get_code(buf: &[u8], idx: usize) -> u8 {
    (buf[idx / 4] >> ((idx % 4) * 2)) & 0b11
}

/// Exact optimal adversary over all feasible gap trajectories of length `t`
/// (start tied, move by at most one, never negative), by backward dynamic
/// programming over (step, gap). Ties prefer Up, then Stay, then Down, so
/// the recovered path is the canonical loop-then-straight representative
/// among co-optimal plays.
pub fn best_response_dp_finite<S: Scalar, P: LagProbPolicy<S>>(
    policy: &P,
    t: u64,
) -> Result<BestResponseResult<S>> {
    if t == 0 {
        return Err(Error::BadHorizon { detail: "best response needs T >= 1".into() });
    }
    if t > DP_MAX_HORIZON {
        return Err(Error::TooLarge { limit: DP_MAX_HORIZON, requested: t });
    }
    let n = t as usize;
    let width = n + 1;
    // codes[(step - 1) * width + d] = argmax move at gap d entering `step`
    let mut codes = vec![0u8; (n * width).div_ceil(4)];
    // value rows: next = V_{step+1}, cur = V_step, over gaps 0..=n (+1 slack
    // so `d + 1` is always readable)
    let mut next = vec![S::zero(); width + 1];
    let mut cur = vec![S::zero(); width + 1];
    for step in (1..=n).rev() {
        let max_d = step - 1; // gap entering `step` after at most step-1 climbs
        for d in 0..=max_d {
            let p = checked_lag_prob(policy, d as u64, step as u64)?;
            let mut best = p + next[d + 1];
            let mut code = CODE_UP;
            if next[d] > best {
                best = next[d];
                code = CODE_STAY;
            }
            if d > 0 && next[d - 1] - p > best {
                best = next[d - 1] - p;
                code = CODE_DOWN;
            }
            cur[d] = best;
            set_code(&mut codes, (step - 1) * width + d, code);
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let regret = next[0];

    let mut gaps = Vec::with_capacity(n + 1);
    gaps.push(0u64);
    let mut d = 0usize;
    for step in 1..=n {
        match get_code(&codes, (step - 1) * width + d) {
            CODE_STAY => {}
            CODE_DOWN => d -= 1,
            _ => d += 1,
        }
        gaps.push(d as u64);
    }
    let structure = classify_finite_path(&gaps);
    Ok(BestResponseResult { regret, play: OptimalPlay::FinitePath { gaps }, structure })
}

/// Loop-then-straight means: up to the last visit to gap zero the path stays
/// within {0, 1} with at most one stay (at zero, to fix parity), and from
/// there it climbs by exactly one each step.
fn classify_finite_path(gaps: &[u64]) -> PathStructure {
    let m = match gaps.iter().rposition(|&d| d == 0) {
        Some(m) => m,
        None => return PathStructure::Other,
    };
    let mut stays = 0u32;
    for i in 1..=m {
        if gaps[i] > 1 {
            return PathStructure::Other;
        }
        if gaps[i] == gaps[i - 1] {
            if gaps[i] != 0 {
                return PathStructure::Other;
            }
            stays += 1;
            if stays > 1 {
                return PathStructure::Other;
            }
        }
    }
    for i in m + 1..gaps.len() {
        if gaps[i] != gaps[i - 1] + 1 {
            return PathStructure::Other;
        }
    }
    PathStructure::LoopThenStraight { straight_len: (gaps.len() - 1 - m) as u64 }
}

/// Controls for [`best_response_vi_geometric`].
#[derive(Debug, Clone, Copy)]
pub struct ViOptions<S> {
    /// Top of the truncated gap range; the stationary lag mass must already
    /// be below `tol` there.
    pub d_max: u64,
    /// Convergence tolerance on the value function (sup norm, after the
    /// geometric-tail correction).
    pub tol: S,
    pub max_sweeps: u64,
}

impl<S: Scalar> Default for ViOptions<S> {
    fn default() -> Self {
        ViOptions { d_max: 4096, tol: S::of(1e-10), max_sweeps: 1_000_000 }
    }
}

/// Exact optimal stationary adversary under a geometric horizon with stop
/// probability `delta`, by value iteration on the gap process:
/// `V(d) = max{ p(d) + (1-delta) V(d+1), -p(d) + (1-delta) V(d-1) }` with
/// the tie forced Up and gap zero forced Up (both moves coincide there by
/// symmetry). The policy is read at step 1, so it must be stationary.
/// Returns the series-normalized regret `(1 - delta) * V(0)`.
pub fn best_response_vi_geometric<S: Scalar, P: LagProbPolicy<S>>(
    policy: &P,
    delta: S,
    opts: &ViOptions<S>,
) -> Result<BestResponseResult<S>> {
    let df = delta.as_f64();
    if !(df > 0.0 && df < 1.0) {
        return Err(Error::BadDelta { delta: df });
    }
    if !(opts.tol > S::zero()) {
        return Err(Error::NonPositiveTolerance { tol: opts.tol.as_f64() });
    }
    let n = opts.d_max as usize;
    let mut p = Vec::with_capacity(n + 1);
    for d in 0..=opts.d_max {
        p.push(checked_lag_prob(policy, d, 1)?);
    }
    if p[n] >= opts.tol {
        return Err(Error::DomainTooSmall { d_max: opts.d_max });
    }
    let keep = S::one() - delta;
    let mut v_old = vec![S::zero(); n + 1];
    let mut v_new = vec![S::zero(); n + 1];
    let mut converged = false;
    for _ in 0..opts.max_sweeps {
        let mut max_diff = S::zero();
        for d in 0..=n {
            let up_next = if d == n { v_old[n] } else { v_old[d + 1] };
            let up = p[d] + keep * up_next;
            let val = if d == 0 {
                up
            } else {
                let down = keep * v_old[d - 1] - p[d];
                if down > up {
                    down
                } else {
                    up
                }
            };
            let diff = (val - v_old[d]).abs();
            if diff > max_diff {
                max_diff = diff;
            }
            v_new[d] = val;
        }
        std::mem::swap(&mut v_old, &mut v_new);
        if max_diff * keep / delta <= opts.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: opts.max_sweeps });
    }

    let mut actions = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let action = if d == 0 {
            GapAction::Up
        } else {
            let up_next = if d == n { v_old[n] } else { v_old[d + 1] };
            let up = p[d] + keep * up_next;
            let down = keep * v_old[d - 1] - p[d];
            if down > up {
                GapAction::Down
            } else {
                GapAction::Up
            }
        };
        actions.push(action);
    }
    let structure = classify_stationary_actions(&actions);
    Ok(BestResponseResult {
        regret: keep * v_old[0],
        play: OptimalPlay::StationaryActions { actions },
        structure,
    })
}

/// Straight-then-loop means: Up strictly below some threshold, Down from it
/// onward. Starting tied, such a policy climbs to the threshold and then
/// alternates `threshold - 1 <-> threshold`, i.e. plays the straight prefix
/// of length `threshold - 1` followed by the loop pair.
fn classify_stationary_actions(actions: &[GapAction]) -> PathStructure {
    match actions.iter().position(|&a| a == GapAction::Down) {
        None => PathStructure::Other,
        Some(first_down) => {
            if actions[first_down..].iter().all(|&a| a == GapAction::Down) {
                PathStructure::StraightThenLoop { threshold: first_down as u64 }
            } else {
                PathStructure::Other
            }
        }
    }
}
