//! Seeded Monte Carlo cross-check for the exact evaluators.
//!
//! Per-step regret is always the analytic expectation over the forecaster's
//! weights; sampling covers only the genuinely random inputs — which script
//! a distribution draws and where a geometric horizon stops. Each trial
//! therefore scores an exact conditional expectation (a Rao-Blackwellized
//! draw), so a deterministic finite script yields the exact value with zero
//! standard error, and randomized inputs converge at the usual `1/sqrt(n)`
//! rate with strictly less variance than naive coin-by-coin simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversaries::{AdversarySpec, DistKind, GeometricScript, GeometricTail, TeamSplit};
use crate::domain::{validate_config, EtaSchedule, GameConfig};
use crate::error::{Error, Result};
use crate::policies::{straight_lag_prob, team_lag_prob};
use crate::scalar::{KahanSum, Scalar};

use super::closed_form::{cycle_value_at, pure_loop_value, straight_value_at};
use super::script::exact_regret_script;
use super::{check_distribution, constant_rate};

/// Longest straight-mass prefix table a geometric sampler will materialize;
/// beyond it (or once terms underflow to zero) sums continue incrementally.
const GEO_TABLE_CAP: usize = 1 << 22;

/// Sample mean of the regret with its standard error (`sample std /
/// sqrt(trials)`; zero when fewer than two trials or nothing is random).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate<S> {
    pub mean: S,
    pub stderr: S,
    pub trials: u64,
}

/// Monte Carlo estimate of the expected regret of `sched` against `adv`.
///
/// The `seed` fully determines the result: trials run serially off one
/// `ChaCha8` stream, so identical inputs reproduce identical estimates
/// bit for bit. Finite deterministic scripts have no randomness left and
/// return the exact value with `stderr = 0`.
pub fn monte_carlo_regret<S: Scalar>(
    adv: &AdversarySpec,
    sched: &EtaSchedule<S>,
    cfg: &GameConfig<S>,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate<S>> {
    validate_config(cfg, sched)?;
    if trials == 0 {
        return Err(Error::InsufficientSamples { got: 0, need: 1 });
    }
    match adv {
        AdversarySpec::Finite(script) => {
            let exact = exact_regret_script(script, sched, cfg)?;
            Ok(MonteCarloEstimate { mean: exact.regret, stderr: S::zero(), trials })
        }
        AdversarySpec::Mixture(dist) => {
            check_distribution(dist, cfg)?;
            match *dist.kind() {
                DistKind::Explicit => {
                    let mut cum = Vec::new();
                    let mut values = Vec::new();
                    let mut acc = 0.0f64;
                    for (script, w) in dist.entries() {
                        acc += w;
                        cum.push(acc);
                        values.push(exact_regret_script(&script, sched, cfg)?.regret);
                    }
                    run_trials(trials, seed, |rng| {
                        let u = rng.random::<f64>();
                        let i = cum.partition_point(|&c| c <= u).min(values.len() - 1);
                        Ok(values[i])
                    })
                }
                DistKind::Lsrand { straight_len, loop_max, .. } => {
                    let tables =
                        ScriptFamilyTables::build(sched, dist.split(), straight_len, loop_max)?;
                    run_trials(trials, seed, |rng| {
                        let j = rng.random_range(0..loop_max);
                        let tails = rng.random::<bool>();
                        tables.value(j, tails)
                    })
                }
                DistKind::LsrandPp { t, straight_len, loop_max, mix_p } => {
                    let tables =
                        ScriptFamilyTables::build(sched, dist.split(), straight_len, loop_max)?;
                    let pure0 = pure_loop_value(t, 0, sched, dist.split())?;
                    let pure1 = pure_loop_value(t, 1, sched, dist.split())?;
                    let cut = mix_p + (1.0 - mix_p) / 2.0;
                    run_trials(trials, seed, |rng| {
                        let u = rng.random::<f64>();
                        if u < mix_p {
                            let j = rng.random_range(0..loop_max);
                            let tails = rng.random::<bool>();
                            tables.value(j, tails)
                        } else if u < cut {
                            Ok(pure0)
                        } else {
                            Ok(pure1)
                        }
                    })
                }
            }
        }
        AdversarySpec::Geometric(gs) => {
            let delta = cfg.horizon.stop_prob()?;
            if gs.num_experts() != cfg.num_experts {
                return Err(Error::BadExpertCount { k: gs.num_experts() });
            }
            let eta = constant_rate(sched).ok_or_else(|| Error::DomainError {
                detail: "geometric horizon needs a constant learning rate".into(),
            })?;
            let mut sampler = GeometricSampler::new(*gs, eta)?;
            let delta_f64 = delta.as_f64();
            let log_keep = (-delta_f64).ln_1p();
            run_trials(trials, seed, |rng| {
                let n = draw_stop_time(rng, delta_f64, log_keep);
                Ok(sampler.value(n))
            })
        }
    }
}

/// Runs `trials` draws off a fresh seeded stream and reduces them to a mean
/// and standard error with compensated sums.
fn run_trials<S: Scalar>(
    trials: u64,
    seed: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<S>,
) -> Result<MonteCarloEstimate<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = KahanSum::new();
    let mut sum_sq = KahanSum::new();
    for _ in 0..trials {
        let v = draw(&mut rng)?;
        sum.add(v);
        sum_sq.add(v * v);
    }
    let n = S::from_count(trials);
    let mean = sum.total() / n;
    let stderr = if trials < 2 {
        S::zero()
    } else {
        let var = (sum_sq.total() - n * mean * mean) / (n - S::one());
        (var.max(S::zero()) / n).sqrt()
    };
    Ok(MonteCarloEstimate { mean, stderr, trials })
}

/// Number of steps a geometric horizon survives: `P(N >= t) = (1-delta)^t`.
fn draw_stop_time(rng: &mut ChaCha8Rng, delta: f64, log_keep: f64) -> u64 {
    if delta >= 1.0 {
        return 0;
    }
    let u = 1.0 - rng.random::<f64>(); // (0, 1]
    let n = (u.ln() / log_keep).floor();
    if n <= 0.0 {
        0
    } else {
        n as u64
    }
}

/// Prefix tables scoring one script of the randomized loop-then-straight
/// support in O(1) (time-invariant schedules) or O(straight_len) otherwise.
struct ScriptFamilyTables<'a, S> {
    sched: &'a EtaSchedule<S>,
    split: TeamSplit,
    straight_len: u64,
    /// `cum[j]` = regret of `j` loop cycles starting at step `offset + 2`,
    /// for offsets 0 (heads) and 1 (tails); empty when time-invariant.
    heads_cum: Vec<S>,
    tails_cum: Vec<S>,
    invariant_cycle: Option<S>,
    invariant_straight: Option<S>,
}

impl<'a, S: Scalar> ScriptFamilyTables<'a, S> {
    fn build(
        sched: &'a EtaSchedule<S>,
        split: TeamSplit,
        straight_len: u64,
        loop_max: u64,
    ) -> Result<Self> {
        let invariant = sched.is_time_invariant();
        let (mut heads_cum, mut tails_cum) = (Vec::new(), Vec::new());
        let mut invariant_cycle = None;
        if invariant {
            invariant_cycle = Some(cycle_value_at(sched, split, 1)?);
        } else {
            heads_cum.reserve(loop_max as usize);
            tails_cum.reserve(loop_max as usize);
            let (mut h, mut t) = (KahanSum::new(), KahanSum::new());
            heads_cum.push(S::zero());
            tails_cum.push(S::zero());
            for i in 1..loop_max {
                h.add(cycle_value_at(sched, split, 2 * i)?);
                t.add(cycle_value_at(sched, split, 2 * i + 1)?);
                heads_cum.push(h.total());
                tails_cum.push(t.total());
            }
        }
        let invariant_straight = if invariant {
            let mut acc = KahanSum::new();
            for d in 0..straight_len {
                acc.add(straight_value_at(sched, split.num_experts(), d, 1)?);
            }
            Some(acc.total())
        } else {
            None
        };
        Ok(ScriptFamilyTables {
            sched,
            split,
            straight_len,
            heads_cum,
            tails_cum,
            invariant_cycle,
            invariant_straight,
        })
    }

    fn value(&self, j: u64, tails: bool) -> Result<S> {
        let loop_part = match self.invariant_cycle {
            Some(cyc) => S::from_count(j) * cyc,
            None if tails => self.tails_cum[j as usize],
            None => self.heads_cum[j as usize],
        };
        let straight = match self.invariant_straight {
            Some(s) => s,
            None => {
                let base = 2 * j + tails as u64;
                let mut acc = KahanSum::new();
                for d in 0..self.straight_len {
                    acc.add(straight_value_at(
                        self.sched,
                        self.split.num_experts(),
                        d,
                        base + d + 1,
                    )?);
                }
                acc.total()
            }
        };
        Ok(loop_part + straight)
    }
}

/// Scores one realized horizon length for a geometric script: cumulative
/// straight masses up to the prefix, then closed loop-pair increments.
struct GeometricSampler<S> {
    eta: S,
    k: u32,
    prefix: u64,
    tail: GeometricTail,
    /// Per-pair regret constants once looping starts.
    up: S,
    down: S,
    /// `cum[m]` = regret of the first `m` straight steps.
    cum: Vec<S>,
    saturated: bool,
}

impl<S: Scalar> GeometricSampler<S> {
    fn new(gs: GeometricScript, eta: S) -> Result<Self> {
        if eta < S::zero() || !eta.is_finite() {
            return Err(Error::NegativeRate { rate: eta.as_f64() });
        }
        let split = gs.split;
        let (a, b) = (split.team_a, split.team_b);
        let (up, down) = match (gs.straight_prefix, gs.tail) {
            (_, GeometricTail::StraightRun) => (S::zero(), S::zero()),
            (0, GeometricTail::LoopPair) => (
                S::of(b as f64) / S::of((a + b) as f64),
                -team_lag_prob(a, b, 1, eta),
            ),
            (l, GeometricTail::LoopPair) => {
                if split.num_experts() != 2 {
                    return Err(Error::BadExpertCount { k: split.num_experts() });
                }
                (straight_lag_prob(l, eta, 2), -straight_lag_prob(l + 1, eta, 2))
            }
        };
        Ok(GeometricSampler {
            eta,
            k: split.num_experts(),
            prefix: gs.straight_prefix,
            tail: gs.tail,
            up,
            down,
            cum: vec![S::zero()],
            saturated: false,
        })
    }

    /// Regret of the first `n` straight steps, `sum_{d<n} s_d`.
    fn straight_sum(&mut self, n: u64) -> S {
        if self.eta.is_zero() {
            // constant mass, no table needed
            return S::from_count(n) * straight_lag_prob(0, self.eta, self.k);
        }
        while !self.saturated && self.cum.len() <= n as usize && self.cum.len() < GEO_TABLE_CAP {
            let d = (self.cum.len() - 1) as u64;
            let s = straight_lag_prob(d, self.eta, self.k);
            if s.is_zero() {
                self.saturated = true;
                break;
            }
            let last = *self.cum.last().expect("table starts nonempty");
            self.cum.push(last + s);
        }
        if let Some(&v) = self.cum.get(n as usize) {
            return v;
        }
        let mut acc = *self.cum.last().expect("table starts nonempty");
        if self.saturated {
            return acc;
        }
        for d in (self.cum.len() - 1) as u64..n {
            let s = straight_lag_prob(d, self.eta, self.k);
            if s.is_zero() {
                break;
            }
            acc += s;
        }
        acc
    }

    /// Regret accumulated over a horizon that survives exactly `n` steps.
    fn value(&mut self, n: u64) -> S {
        let straight = self.straight_sum(n.min(match self.tail {
            GeometricTail::StraightRun => n,
            GeometricTail::LoopPair => self.prefix,
        }));
        let span = match self.tail {
            GeometricTail::StraightRun => 0,
            GeometricTail::LoopPair => n.saturating_sub(self.prefix),
        };
        let pairs = S::from_count(span / 2) * (self.up + self.down);
        let dangling = if span % 2 == 1 { self.up } else { S::zero() };
        straight + pairs + dangling
    }
}
