//! Shared helpers for the integration suites: an independent full-vector
//! simulator (per-expert gain tracking, no reduced state) and randomized
//! configuration generators.

#![allow(dead_code)]
#![allow(clippy::manual_is_multiple_of)]

use rand::Rng;
use regret_forge::adversaries::{
    build_finite_loop, build_lsdet, straight_primitive, AdversaryScript, GeometricScript,
    GeometricTail, StepAction,
};
use regret_forge::domain::{EtaSchedule, RateDist, RatePiece, RateRule, RateWeight};

/// Random finite configuration: a script drawn from four sources
/// (loop-then-straight, pure loop, pure straight, segment soup), a schedule
/// from any family, and the horizon/expert count. The source index comes
/// along for coverage accounting.
pub fn random_finite_case<R: Rng>(
    rng: &mut R,
) -> (usize, AdversaryScript, EtaSchedule<f64>, u64, u32) {
    let k = rng.random_range(2..=6u32);
    let t = rng.random_range(1..=200u64);
    let source = rng.random_range(0..4usize);
    let script = match source {
        0 => build_lsdet(t, k, Some(t - 2 * rng.random_range(0..=t / 2))).unwrap(),
        1 => build_finite_loop(t, k).unwrap(),
        2 => straight_primitive(k, t).unwrap(),
        _ => random_script(rng, t, k),
    };
    let sched = random_schedule(rng, t);
    (source, script, sched, t, k)
}

/// Expected regret of a finite script, computed from scratch: one cumulative
/// gain per expert, softmax masses straight from the definition, and the
/// benchmark taken as the final maximum. No shared state with the production
/// reduced-state engine.
pub fn full_vector_regret(script: &AdversaryScript, sched: &EtaSchedule<f64>) -> f64 {
    let split = script.split();
    let k = split.num_experts() as usize;
    let team_a = split.team_a as usize;
    let mut gains = vec![0u64; k];
    let mut player = 0.0f64;
    for (i, action) in script.actions().enumerate() {
        let step = i as u64 + 1;
        let advancing: Vec<usize> = match action {
            StepAction::Idle => continue,
            StepAction::AdvanceTeamA => (0..team_a).collect(),
            StepAction::AdvanceTeamB => (team_a..k).collect(),
            StepAction::AdvanceLeaderSingle => vec![0],
        };
        let mixture = sched.mixture_at(step).unwrap();
        player += mixture.expect(|eta| softmax_mass(&gains, eta, &advancing));
        for &e in &advancing {
            gains[e] += 1;
        }
    }
    *gains.iter().max().unwrap() as f64 - player
}

/// Total softmax mass the forecaster puts on `selected` experts.
fn softmax_mass(gains: &[u64], eta: f64, selected: &[usize]) -> f64 {
    let top = *gains.iter().max().unwrap();
    let weights: Vec<f64> = gains.iter().map(|&g| (eta * (g as f64 - top as f64)).exp()).collect();
    let total: f64 = weights.iter().sum();
    selected.iter().map(|&e| weights[e]).sum::<f64>() / total
}

/// Discount-weighted expected regret of an action prefix under a constant
/// rate: step `j` (1-based) carries weight `(1 - delta)^j`, and each step
/// contributes its benchmark increment minus the mass on the advancing
/// experts.
pub fn discounted_direct_sum(
    script: &GeometricScript,
    steps: usize,
    eta: f64,
    delta: f64,
) -> f64 {
    let split = script.split;
    let k = split.num_experts() as usize;
    let team_a = split.team_a as usize;
    let mut gains = vec![0u64; k];
    let mut bench = 0u64;
    let mut weight = 1.0f64;
    let mut total = 0.0f64;
    for action in expand_geometric(script, steps) {
        weight *= 1.0 - delta;
        let advancing: Vec<usize> = match action {
            StepAction::Idle => continue,
            StepAction::AdvanceTeamA => (0..team_a).collect(),
            StepAction::AdvanceTeamB => (team_a..k).collect(),
            StepAction::AdvanceLeaderSingle => vec![0],
        };
        let mass = softmax_mass(&gains, eta, &advancing);
        for &e in &advancing {
            gains[e] += 1;
        }
        let new_bench = (*gains.iter().max().unwrap()).max(bench);
        total += weight * ((new_bench - bench) as f64 - mass);
        bench = new_bench;
    }
    total
}

/// First `steps` actions of a geometric-horizon script: the straight prefix,
/// then either a straight run or the two-step loop that advances the leading
/// side first.
pub fn expand_geometric(script: &GeometricScript, steps: usize) -> Vec<StepAction> {
    let mut actions = Vec::with_capacity(steps);
    while actions.len() < steps && (actions.len() as u64) < script.straight_prefix {
        actions.push(StepAction::AdvanceLeaderSingle);
    }
    let mut phase = 0u64;
    while actions.len() < steps {
        actions.push(match script.tail {
            GeometricTail::StraightRun => StepAction::AdvanceLeaderSingle,
            GeometricTail::LoopPair => {
                if phase % 2 == 0 {
                    StepAction::AdvanceTeamA
                } else {
                    StepAction::AdvanceTeamB
                }
            }
        });
        phase += 1;
    }
    actions
}

/// Random segment soup of exactly `t` steps over `k` experts.
pub fn random_script<R: Rng>(rng: &mut R, t: u64, k: u32) -> AdversaryScript {
    let mut tokens = Vec::new();
    let mut left = t;
    while left > 0 {
        match rng.random_range(0..4u32) {
            0 if left >= 2 => {
                let cycles = rng.random_range(1..=left / 2);
                tokens.push(format!("L*{cycles}"));
                left -= 2 * cycles;
            }
            1 => {
                let len = rng.random_range(1..=left);
                tokens.push(format!("S*{len}"));
                left -= len;
            }
            2 => {
                let len = rng.random_range(1..=left.min(3));
                tokens.push(format!("I*{len}"));
                left -= len;
            }
            _ => {
                tokens.push("H".to_string());
                left -= 1;
            }
        }
    }
    AdversaryScript::parse(&tokens.join(" "), k).unwrap()
}

/// Random schedule from every family, valid for steps `1..=t`.
pub fn random_schedule<R: Rng>(rng: &mut R, t: u64) -> EtaSchedule<f64> {
    let rate = |rng: &mut R| rng.random_range(0.0..2.5f64);
    match rng.random_range(0..7u32) {
        0 => EtaSchedule::Single { constant_rate: rate(rng) },
        1 => EtaSchedule::Decreasing {
            rate_fn: RateRule::InverseSqrt { scale: rng.random_range(0.1..3.0) },
        },
        2 => {
            let mut rates: Vec<f64> = (0..t).map(|_| rate(rng)).collect();
            rates.sort_by(|a, b| b.partial_cmp(a).unwrap());
            EtaSchedule::Decreasing { rate_fn: RateRule::Table { rates } }
        }
        3 => EtaSchedule::Arbitrary { rate_fn: RateRule::Piecewise { pieces: random_pieces(rng, t) } },
        4 => EtaSchedule::Arbitrary {
            rate_fn: RateRule::Table { rates: (0..t).map(|_| rate(rng)).collect() },
        },
        5 => EtaSchedule::Random {
            rate_dist: RateDist::Stationary { support: random_support(rng) },
        },
        _ => EtaSchedule::Random {
            rate_dist: RateDist::PerStep { steps: (0..t).map(|_| random_support(rng)).collect() },
        },
    }
}

fn random_pieces<R: Rng>(rng: &mut R, t: u64) -> Vec<RatePiece<f64>> {
    let mut starts = vec![1u64];
    for _ in 0..rng.random_range(0..3u32) {
        starts.push(rng.random_range(1..=t.max(2)));
    }
    starts.sort_unstable();
    starts.dedup();
    starts
        .into_iter()
        .map(|from_step| RatePiece { from_step, rate: rng.random_range(0.0..2.5) })
        .collect()
}

fn random_support<R: Rng>(rng: &mut R) -> Vec<RateWeight<f64>> {
    let n = rng.random_range(1..=3usize);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0f64)).collect();
    let total: f64 = raw.iter().sum();
    let mut support: Vec<RateWeight<f64>> = raw
        .iter()
        .map(|w| RateWeight { rate: rng.random_range(0.0..2.5), weight: w / total })
        .collect();
    let head: f64 = support.iter().skip(1).map(|rw| rw.weight).sum();
    support[0].weight = 1.0 - head;
    support
}

/// Relative agreement with an absolute floor of 1, the tolerance the
/// equivalence suites run at.
pub fn assert_rel_close(a: f64, b: f64, tol: f64, ctx: &str) {
    let scale = 1.0f64.max(a.abs()).max(b.abs());
    assert!((a - b).abs() <= tol * scale, "{ctx}: {a} vs {b} (tol {tol})");
}
