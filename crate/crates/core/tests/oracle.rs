//! Cross-validation of the production evaluators against an independent
//! full-vector simulator, plus the structural facts the adversary
//! constructions rely on.

mod common;

use common::{
    assert_rel_close, discounted_direct_sum, full_vector_regret, random_finite_case,
    random_schedule, random_script,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regret_forge::adversaries::{
    build_geometric_loop, build_geometric_sl, build_geometric_straight, build_lsdet, build_lsrand,
    build_lsrandpp, AdversarySpec,
};
use regret_forge::domain::{EtaSchedule, GameConfig, Horizon, RateRule};
use regret_forge::regret::{
    best_response_dp_finite, evaluate, exact_regret_script, geometric_loop_regret,
    geometric_sl_regret, geometric_straight_regret, odd_lsdet_regret_formula, step_regrets,
    MwaPolicy,
};

const GRID_TOL: f64 = 1e-10;

fn fin_cfg(t: u64, k: u32) -> GameConfig<f64> {
    GameConfig::new(Horizon::Finite { steps: t }, k)
}

/// Random straight length of the same parity as `t`, so the loop phase
/// closes on an even number of steps.
fn random_straight_len<R: Rng>(rng: &mut R, t: u64) -> u64 {
    t - 2 * rng.random_range(0..=t / 2)
}

#[test]
fn closed_forms_match_an_independent_full_vector_simulator() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD15C0);
    let mut seen = [0u32; 4];
    for case in 0..200 {
        let (source, script, sched, t, k) = random_finite_case(&mut rng);
        seen[source] += 1;
        let adv = AdversarySpec::Finite(script.clone());
        let report = evaluate(&adv, &sched, &fin_cfg(t, k), None).unwrap();
        let independent = full_vector_regret(&script, &sched);
        assert_rel_close(
            report.regret,
            independent,
            GRID_TOL,
            &format!("case {case}: T={t} k={k} script {}", script.to_text()),
        );
    }
    assert!(seen.iter().all(|&n| n >= 20), "unbalanced script sources {seen:?}");
}

#[test]
fn odd_expert_counts_agree_between_formula_engine_and_simulator() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..25 {
        let k = [3u32, 5][rng.random_range(0..2usize)];
        let t = rng.random_range(2..=150u64);
        let l = random_straight_len(&mut rng, t);
        let eta = rng.random_range(0.01..2.0f64);
        let script = build_lsdet(t, k, Some(l)).unwrap();
        let sched = EtaSchedule::single(eta);
        let formula = odd_lsdet_regret_formula(t, l, eta, k).unwrap().regret;
        let engine = exact_regret_script(&script, &sched, &fin_cfg(t, k)).unwrap().regret;
        let independent = full_vector_regret(&script, &sched);
        let ctx = format!("T={t} l={l} k={k} eta={eta}");
        assert_rel_close(formula, engine, GRID_TOL, &ctx);
        assert_rel_close(formula, independent, GRID_TOL, &ctx);
    }
}

#[test]
fn named_mixture_means_match_support_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for case in 0..30 {
        let k = rng.random_range(2..=6u32);
        let t = rng.random_range(4..=60u64);
        let max_l = t.saturating_sub(3);
        let l = rng.random_range(0..=max_l.min(8));
        let dist = if case % 2 == 0 {
            build_lsrand(t, k, Some(l)).unwrap()
        } else {
            build_lsrandpp(t, k, Some(l), rng.random_range(0.05..1.0f64)).unwrap()
        };
        let sched = random_schedule(&mut rng, t);
        let closed =
            evaluate(&AdversarySpec::Mixture(dist.clone()), &sched, &fin_cfg(t, k), None)
                .unwrap()
                .regret;
        let enumerated: f64 =
            dist.entries().map(|(script, w)| w * full_vector_regret(&script, &sched)).sum();
        assert_rel_close(closed, enumerated, GRID_TOL, &format!("case {case}: T={t} l={l} k={k}"));
    }
}

#[test]
fn nonincreasing_schedules_dominate_their_final_loop_rate_term_by_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..40 {
        let k = rng.random_range(2..=5u32);
        let t = rng.random_range(3..=120u64);
        // Keep the loop phase nonempty so the comparison rate eta(T - l)
        // lands on a real step.
        let l = random_straight_len(&mut rng, t - 2);
        let rate_fn = match case % 3 {
            0 => RateRule::InverseSqrt { scale: rng.random_range(0.2..2.5f64) },
            1 => {
                let mut rates: Vec<f64> =
                    (0..t).map(|_| rng.random_range(0.01..2.0f64)).collect();
                rates.sort_by(|a, b| b.partial_cmp(a).unwrap());
                RateRule::Table { rates }
            }
            _ => {
                let mut pieces = common_pieces(&mut rng, t);
                pieces.sort_by_key(|p| p.from_step);
                RateRule::Piecewise { pieces }
            }
        };
        let final_loop_rate = rate_fn.rate_at(t - l).unwrap();
        let sched = EtaSchedule::Decreasing { rate_fn };
        let constant = EtaSchedule::single(final_loop_rate);
        let script = build_lsdet(t, k, Some(l)).unwrap();
        let cfg = fin_cfg(t, k);
        let with_schedule = step_regrets(&script, &sched, &cfg).unwrap();
        let with_constant = step_regrets(&script, &constant, &cfg).unwrap();
        for (step, (a, b)) in with_schedule.iter().zip(&with_constant).enumerate() {
            assert!(
                a >= &(b - 1e-12),
                "case {case}: step {} regret {a} under schedule < {b} under constant",
                step + 1
            );
        }
    }
}

/// Descending-rate pieces starting at step 1.
fn common_pieces(
    rng: &mut ChaCha8Rng,
    t: u64,
) -> Vec<regret_forge::domain::RatePiece<f64>> {
    let mut starts = vec![1u64];
    for _ in 0..rng.random_range(1..4u32) {
        starts.push(rng.random_range(2..=t.max(2)));
    }
    starts.sort_unstable();
    starts.dedup();
    let mut rates: Vec<f64> = (0..starts.len()).map(|_| rng.random_range(0.01..2.0)).collect();
    rates.sort_by(|a, b| b.partial_cmp(a).unwrap());
    starts
        .into_iter()
        .zip(rates)
        .map(|(from_step, rate)| regret_forge::domain::RatePiece { from_step, rate })
        .collect()
}

#[test]
fn tie_breaking_loop_gain_peaks_at_zero_gap() {
    for i in 0..40 {
        let eta = 0.02 + 0.12 * i as f64;
        let gain = |d: f64| 1.0 / ((eta * d).exp() + 1.0) - 1.0 / ((eta * (d + 1.0)).exp() + 1.0);
        let at_zero = gain(0.0);
        for d in 1..60 {
            assert!(
                gain(d as f64) <= at_zero,
                "eta={eta}: loop gain at gap {d} exceeds the tie value"
            );
        }
    }
}

#[test]
fn dp_best_response_dominates_every_sampled_script() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0);
    for case in 0..40 {
        let t = rng.random_range(1..=12u64);
        let sched = random_schedule(&mut rng, t);
        let policy = MwaPolicy::new(&sched).unwrap();
        let oracle = best_response_dp_finite(&policy, t).unwrap().regret;
        for _ in 0..8 {
            let script = random_script(&mut rng, t, 2);
            let scripted =
                exact_regret_script(&script, &sched, &fin_cfg(t, 2)).unwrap().regret;
            assert!(
                oracle >= scripted - 1e-9,
                "case {case}: oracle {oracle} < script {} at {scripted}",
                script.to_text()
            );
        }
    }
}

#[test]
fn geometric_closed_forms_match_discounted_direct_sums() {
    let steps = 400;
    for delta in [0.2f64, 0.3, 0.5, 0.8] {
        // After 400 steps the remaining discounted mass is far below any
        // tolerance in play.
        let own_tail = (1.0 - delta).powi(steps as i32 + 1) / delta;
        for eta in [0.0f64, 0.1, 0.7, 1.5] {
            for k in [2u32, 3, 4] {
                let lp = geometric_loop_regret(delta, eta, k).unwrap();
                let direct =
                    discounted_direct_sum(&build_geometric_loop(k).unwrap(), steps, eta, delta);
                assert!(
                    (lp.regret - direct).abs() <= lp.truncation_bound + own_tail + 1e-11,
                    "loop delta={delta} eta={eta} k={k}: {} vs {direct}",
                    lp.regret
                );
                let sp = geometric_straight_regret(delta, eta, k, 1e-13).unwrap();
                let direct =
                    discounted_direct_sum(&build_geometric_straight(k).unwrap(), steps, eta, delta);
                assert!(
                    (sp.regret - direct).abs() <= sp.truncation_bound + own_tail + 1e-11,
                    "straight delta={delta} eta={eta} k={k}: {} vs {direct}",
                    sp.regret
                );
            }
            for l in [Some(0u64), Some(1), Some(2), Some(5), None] {
                let sl = geometric_sl_regret(delta, eta, l, 1e-13).unwrap();
                let direct = discounted_direct_sum(&build_geometric_sl(l), steps, eta, delta);
                assert!(
                    (sl.regret - direct).abs() <= sl.truncation_bound + own_tail + 1e-11,
                    "sl delta={delta} eta={eta} l={l:?}: {} vs {direct}",
                    sl.regret
                );
            }
        }
    }
}

#[test]
fn lsdet_loop_part_is_cycle_count_times_the_cycle_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let k = [2u32, 4, 6][rng.random_range(0..3usize)];
        let t = rng.random_range(2..=200u64);
        let l = random_straight_len(&mut rng, t);
        let eta = rng.random_range(0.01..2.5f64);
        let cycles = (t - l) / 2;
        let expected = cycles as f64 * (0.5 - 1.0 / (eta.exp() + 1.0));
        let sched = EtaSchedule::single(eta);
        let script = build_lsdet(t, k, Some(l)).unwrap();
        let routed =
            evaluate(&AdversarySpec::Finite(script.clone()), &sched, &fin_cfg(t, k), None)
                .unwrap();
        let engine = exact_regret_script(&script, &sched, &fin_cfg(t, k)).unwrap();
        let ctx = format!("T={t} l={l} k={k} eta={eta}");
        assert_rel_close(routed.loop_part, expected, 1e-12, &ctx);
        assert_rel_close(engine.loop_part, expected, 1e-12, &ctx);
    }
}
