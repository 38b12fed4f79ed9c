//! Exact expected-regret evaluation.
//!
//! [`evaluate`] is the front door: it validates the configuration once, then
//! routes each adversary to the cheapest exact evaluator that applies —
//! closed forms for the canonical loop/straight shapes, the step-by-step
//! engine for everything else finite, closed means for the named randomized
//! families, and the geometric-horizon forms for eventually-periodic play.
//! Every path returns the same [`RegretReport`] shape with the loop/straight
//! decomposition intact, so callers never need to know which route ran.

pub mod best_response;
pub mod closed_form;
pub mod monte_carlo;
pub mod script;

pub use best_response::{
    best_response_dp_finite, best_response_vi_geometric, BestResponseResult, GapAction,
    LagProbPolicy, MwaPolicy, OptimalPlay, PathStructure, ViOptions, DP_MAX_HORIZON,
};
pub use closed_form::{
    geometric_loop_regret, geometric_sl_regret, geometric_straight_regret,
    lsdet_regret_formula, odd_lsdet_regret_formula, GENERAL_WORK_CAP,
};
pub use monte_carlo::{monte_carlo_regret, MonteCarloEstimate};
pub use script::{exact_regret_script, step_regrets};

use crate::adversaries::{
    AdversaryDistribution, AdversaryScript, AdversarySpec, DistKind, GeometricTail, Segment,
    TeamSplit,
};
use crate::domain::{validate_config, EtaSchedule, GameConfig, Horizon, RateRule, RegretReport};
use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Scalar};

/// Default truncation tolerance for geometric series that have no closed
/// form; the reported `truncation_bound` never exceeds it.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// The constant rate a schedule resolves to, if it resolves to one: the
/// constant family, an explicitly constant rule, or a one-atom stationary
/// mixture.
pub(crate) fn constant_rate<S: Scalar>(sched: &EtaSchedule<S>) -> Option<S> {
    match sched {
        EtaSchedule::Single { constant_rate } => Some(*constant_rate),
        EtaSchedule::Decreasing { rate_fn: RateRule::Constant { rate } }
        | EtaSchedule::Arbitrary { rate_fn: RateRule::Constant { rate } } => Some(*rate),
        EtaSchedule::Random { rate_dist } => match rate_dist.support_at(1) {
            Ok(support) if support.len() == 1 => Some(support[0].rate),
            _ => None,
        },
        _ => None,
    }
}

/// `(cycles, straight_len)` when the script is loops-then-straight with no
/// idling, i.e. exactly the shape the finite closed form covers.
fn lsdet_shape(script: &AdversaryScript) -> Option<(u64, u64)> {
    match *script.segments() {
        [Segment::Loop { cycles }] => Some((cycles, 0)),
        [Segment::Straight { len }] => Some((0, len)),
        [Segment::Loop { cycles }, Segment::Straight { len }] => Some((cycles, len)),
        _ => None,
    }
}

/// Exact expected regret of the multiplicative-weights family `sched`
/// against `adv` under `cfg`. `tail_tol` bounds the truncation error of any
/// series evaluation (geometric straight play); `None` means
/// [`DEFAULT_TAIL_TOL`].
pub fn evaluate<S: Scalar>(
    adv: &AdversarySpec,
    sched: &EtaSchedule<S>,
    cfg: &GameConfig<S>,
    tail_tol: Option<S>,
) -> Result<RegretReport<S>> {
    validate_config(cfg, sched)?;
    match adv {
        AdversarySpec::Finite(script) => {
            let formula_shape = match cfg.horizon {
                Horizon::Finite { steps } => {
                    if script.len() == steps
                        && script.num_experts() == cfg.num_experts
                        && script.split() == TeamSplit::balanced(cfg.num_experts)?
                    {
                        lsdet_shape(script)
                    } else {
                        None
                    }
                }
                _ => None,
            };
            match formula_shape {
                Some((_, straight_len)) => {
                    lsdet_regret_formula(script.len(), straight_len, sched, cfg.num_experts)
                }
                None => exact_regret_script(script, sched, cfg),
            }
        }
        AdversarySpec::Mixture(dist) => exact_regret_distribution(dist, sched, cfg),
        AdversarySpec::Geometric(gs) => {
            let delta = cfg.horizon.stop_prob()?;
            if gs.num_experts() != cfg.num_experts {
                return Err(Error::BadExpertCount { k: gs.num_experts() });
            }
            let eta = constant_rate(sched).ok_or_else(|| Error::DomainError {
                detail: "geometric horizon needs a constant learning rate".into(),
            })?;
            let tol = tail_tol.unwrap_or_else(|| S::of(DEFAULT_TAIL_TOL));
            match (gs.straight_prefix, gs.tail) {
                (_, GeometricTail::StraightRun) => {
                    geometric_straight_regret(delta, eta, cfg.num_experts, tol)
                }
                (0, GeometricTail::LoopPair) => {
                    geometric_loop_regret(delta, eta, cfg.num_experts)
                }
                (l, GeometricTail::LoopPair) => {
                    if cfg.num_experts != 2 {
                        return Err(Error::BadExpertCount { k: cfg.num_experts });
                    }
                    geometric_sl_regret(delta, eta, Some(l), tol)
                }
            }
        }
    }
}

/// Shared preconditions for evaluating a distribution under `cfg`: finite
/// horizon, matching expert count, and (for the named kinds) a horizon equal
/// to the length the distribution was built for. Returns the horizon length.
pub(crate) fn check_distribution<S: Scalar>(
    dist: &AdversaryDistribution,
    cfg: &GameConfig<S>,
) -> Result<u64> {
    let steps = cfg.horizon.finite_steps()?;
    if dist.num_experts() != cfg.num_experts {
        return Err(Error::BadExpertCount { k: dist.num_experts() });
    }
    match *dist.kind() {
        DistKind::Lsrand { t, .. } | DistKind::LsrandPp { t, .. } if t != steps => {
            Err(Error::LengthMismatch { script_len: t, horizon: steps })
        }
        _ => Ok(steps),
    }
}

/// Mean regret over a finite distribution of scripts: closed means for the
/// named randomized families, weighted enumeration for explicit supports.
pub fn exact_regret_distribution<S: Scalar>(
    dist: &AdversaryDistribution,
    sched: &EtaSchedule<S>,
    cfg: &GameConfig<S>,
) -> Result<RegretReport<S>> {
    validate_config(cfg, sched)?;
    check_distribution(dist, cfg)?;
    match *dist.kind() {
        DistKind::Lsrand { t, straight_len, loop_max } => {
            closed_form::lsrand_mean(t, straight_len, loop_max, sched, dist.split())
        }
        DistKind::LsrandPp { t, straight_len, loop_max, mix_p } => {
            closed_form::lsrandpp_mean(t, straight_len, loop_max, mix_p, sched, dist.split())
        }
        DistKind::Explicit => {
            let mut loop_acc = KahanSum::new();
            let mut straight_acc = KahanSum::new();
            for (script, w) in dist.entries() {
                let report = exact_regret_script(&script, sched, cfg)?;
                let w = S::of(w);
                loop_acc.add(report.loop_part * w);
                straight_acc.add(report.straight_part * w);
            }
            Ok(RegretReport::from_parts(
                loop_acc.total(),
                straight_acc.total(),
                &cfg.horizon,
                S::zero(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{
        build_geometric_loop, build_geometric_sl, build_geometric_straight, build_lsdet,
        build_lsrand, build_lsrandpp, parse_adversary,
    };
    use crate::domain::{RateDist, RatePiece, RateWeight};

    fn fin_cfg(t: u64, k: u32) -> GameConfig<f64> {
        GameConfig::new(Horizon::Finite { steps: t }, k)
    }

    fn geo_cfg(delta: f64, k: u32) -> GameConfig<f64> {
        GameConfig::new(Horizon::Geometric { stop_prob: delta }, k)
    }

    fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
        (a - b).abs() <= rtol * b.abs().max(1.0)
    }

    #[test]
    fn finite_scripts_route_to_formula_and_engine_consistently() {
        let sched = EtaSchedule::single(0.5f64);
        let script = build_lsdet(12, 2, Some(4)).unwrap();
        let via_eval =
            evaluate(&AdversarySpec::Finite(script.clone()), &sched, &fin_cfg(12, 2), None)
                .unwrap();
        let via_engine = exact_regret_script(&script, &sched, &fin_cfg(12, 2)).unwrap();
        assert!(rel_close(via_eval.regret, 1.818744938781915, 1e-12));
        assert!(rel_close(via_eval.regret, via_engine.regret, 1e-12));
        assert!(rel_close(via_eval.loop_part, via_engine.loop_part, 1e-12));

        // A leading idle step forces the engine path; value shifts but the
        // dispatcher must still succeed.
        let shifted = AdversaryScript::parse("I L*3 S*4 I", 2).unwrap();
        let r = evaluate(&AdversarySpec::Finite(shifted), &sched, &fin_cfg(12, 2), None).unwrap();
        assert!(r.regret > 0.0 && r.regret.is_finite());
    }

    #[test]
    fn piecewise_schedules_agree_between_formula_and_engine() {
        let sched: EtaSchedule<f64> = EtaSchedule::Decreasing {
            rate_fn: RateRule::Piecewise {
                pieces: vec![
                    RatePiece { from_step: 1, rate: 0.6 },
                    RatePiece { from_step: 7, rate: 0.2 },
                ],
            },
        };
        let script = build_lsdet(12, 2, Some(4)).unwrap();
        let formula = evaluate(&AdversarySpec::Finite(script.clone()), &sched, &fin_cfg(12, 2), None)
            .unwrap();
        let engine = exact_regret_script(&script, &sched, &fin_cfg(12, 2)).unwrap();
        assert!(rel_close(formula.regret, engine.regret, 1e-12));
    }

    #[test]
    fn named_mixtures_use_closed_means() {
        let sched = EtaSchedule::single(0.5f64);
        let dist = build_lsrand(9, 2, Some(2)).unwrap();
        let r = evaluate(&AdversarySpec::Mixture(dist), &sched, &fin_cfg(9, 2), None).unwrap();
        assert!(rel_close(r.regret, 1.0, 1e-12), "{}", r.regret);

        let pp = build_lsrandpp(9, 2, Some(2), 0.5).unwrap();
        let r = evaluate(&AdversarySpec::Mixture(pp), &sched, &fin_cfg(9, 2), None).unwrap();
        assert!(rel_close(r.regret, 0.8699186624037091, 1e-12), "{}", r.regret);
    }

    #[test]
    fn closed_means_match_explicit_enumeration() {
        // Force enumeration by walking the lazy support and averaging the
        // engine's per-script reports; the closed mean must agree exactly.
        let sched: EtaSchedule<f64> = EtaSchedule::Decreasing {
            rate_fn: RateRule::Piecewise {
                pieces: vec![
                    RatePiece { from_step: 1, rate: 0.8 },
                    RatePiece { from_step: 5, rate: 0.3 },
                ],
            },
        };
        let cfg = fin_cfg(9, 2);
        for adv in [
            AdversarySpec::Mixture(build_lsrand(9, 2, Some(2)).unwrap()),
            AdversarySpec::Mixture(build_lsrandpp(9, 2, Some(2), 0.3).unwrap()),
        ] {
            let dist = match &adv {
                AdversarySpec::Mixture(d) => d,
                _ => unreachable!(),
            };
            let mut acc = 0.0f64;
            for (script, w) in dist.entries() {
                acc += w * exact_regret_script(&script, &sched, &cfg).unwrap().regret;
            }
            let closed = evaluate(&adv, &sched, &cfg, None).unwrap();
            assert!(rel_close(closed.regret, acc, 1e-12), "{} vs {acc}", closed.regret);
        }
    }

    #[test]
    fn explicit_supports_average_engine_reports() {
        let sched = EtaSchedule::single(0.5f64);
        let cfg = fin_cfg(9, 2);
        let dist = match parse_adversary("0.5@L*4 H;0.5@I L*4", Some(9), 2).unwrap() {
            AdversarySpec::Mixture(d) => d,
            other => panic!("expected mixture, got {other:?}"),
        };
        let r = exact_regret_distribution(&dist, &sched, &cfg).unwrap();
        let expect = 0.5 * (0.9898373248074182 + 0.48983732480741815);
        assert!(rel_close(r.regret, expect, 1e-12), "{}", r.regret);
    }

    #[test]
    fn geometric_scripts_route_to_their_forms() {
        let sched = EtaSchedule::single(0.0f64);
        let cfg = geo_cfg(0.5, 2);
        let lp = evaluate(
            &AdversarySpec::Geometric(build_geometric_loop(2).unwrap()),
            &sched,
            &cfg,
            None,
        )
        .unwrap();
        assert!(rel_close(lp.regret, 1.0 / 6.0, 1e-12));
        let st = evaluate(
            &AdversarySpec::Geometric(build_geometric_straight(2).unwrap()),
            &sched,
            &cfg,
            None,
        )
        .unwrap();
        assert!(rel_close(st.regret, 0.5, 1e-10));
        let sl = evaluate(
            &AdversarySpec::Geometric(build_geometric_sl(Some(3))),
            &EtaSchedule::single(0.4f64),
            &cfg,
            None,
        )
        .unwrap();
        assert!(rel_close(sl.regret, 0.40137164225326416, 1e-10));
    }

    #[test]
    fn geometric_requires_constant_rate_and_matching_k() {
        let cfg = geo_cfg(0.5, 2);
        let adv = AdversarySpec::Geometric(build_geometric_loop(2).unwrap());
        let varying: EtaSchedule<f64> = EtaSchedule::Decreasing {
            rate_fn: RateRule::InverseSqrt { scale: 1.0 },
        };
        assert_eq!(evaluate(&adv, &varying, &cfg, None).unwrap_err().name(), "DomainError");

        let mismatched = AdversarySpec::Geometric(build_geometric_loop(4).unwrap());
        assert_eq!(
            evaluate(&mismatched, &EtaSchedule::single(0.5f64), &cfg, None).unwrap_err(),
            Error::BadExpertCount { k: 4 }
        );

        let sl = AdversarySpec::Geometric(build_geometric_sl(Some(2)));
        assert!(evaluate(&sl, &EtaSchedule::single(0.5f64), &geo_cfg(0.5, 2), None).is_ok());
    }

    #[test]
    fn singleton_stationary_mixture_counts_as_constant() {
        let sched: EtaSchedule<f64> = EtaSchedule::Random {
            rate_dist: RateDist::Stationary {
                support: vec![RateWeight { rate: 0.4, weight: 1.0 }],
            },
        };
        let adv = AdversarySpec::Geometric(build_geometric_sl(Some(3)));
        let r = evaluate(&adv, &sched, &geo_cfg(0.5, 2), None).unwrap();
        assert!(rel_close(r.regret, 0.40137164225326416, 1e-10));
    }

    #[test]
    fn horizon_kind_mismatches_are_rejected() {
        let sched = EtaSchedule::single(0.5f64);
        let script = build_lsdet(12, 2, Some(4)).unwrap();
        assert_eq!(
            evaluate(&AdversarySpec::Finite(script), &sched, &geo_cfg(0.5, 2), None)
                .unwrap_err()
                .name(),
            "BadHorizon"
        );
        let dist = build_lsrand(9, 2, Some(2)).unwrap();
        assert_eq!(
            evaluate(&AdversarySpec::Mixture(dist), &sched, &geo_cfg(0.5, 2), None)
                .unwrap_err()
                .name(),
            "BadHorizon"
        );
        let geo = AdversarySpec::Geometric(build_geometric_loop(2).unwrap());
        assert_eq!(
            evaluate(&geo, &sched, &fin_cfg(9, 2), None).unwrap_err().name(),
            "BadHorizon"
        );
        // distribution built for one horizon, evaluated under another
        let dist = build_lsrand(9, 2, Some(2)).unwrap();
        assert_eq!(
            evaluate(&AdversarySpec::Mixture(dist), &sched, &fin_cfg(11, 2), None).unwrap_err(),
            Error::LengthMismatch { script_len: 9, horizon: 11 }
        );
    }

    #[test]
    fn tail_tolerance_is_honored() {
        let adv = AdversarySpec::Geometric(build_geometric_straight(2).unwrap());
        let sched = EtaSchedule::single(0.3f64);
        let cfg = geo_cfg(0.2, 2);
        let loose = evaluate(&adv, &sched, &cfg, Some(1e-6)).unwrap();
        let tight = evaluate(&adv, &sched, &cfg, None).unwrap();
        assert!(loose.truncation_bound <= 1e-6);
        assert!(tight.truncation_bound <= DEFAULT_TAIL_TOL);
        assert!((loose.regret - tight.regret).abs() <= 1e-6);
    }
}
