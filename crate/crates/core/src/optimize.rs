//! Rate parametrization, asymptotic estimates, and the scalar searches that
//! locate optimal learning rates and mixture weights.
//!
//! The natural search variable is `alpha`, a horizon-free reparametrization
//! of the learning rate (`eta = ln(1 + alpha/sqrt(T))` finite, `eta = ln(1 +
//! alpha sqrt(delta))` geometric): in it the loop and straight regret parts
//! have clean first-order estimates whose balance point gives closed-form
//! optimal rates. This module provides those estimates, the exact scalar
//! minimization of true regret over `alpha`, the mixture-weight factor and
//! its maximizer, the two-equation stationary system of the geometric
//! minimax problem, and power-law extrapolation of finite-horizon data to
//! its limit.

use serde::{Deserialize, Serialize};

use crate::adversaries::AdversarySpec;
use crate::domain::{EtaSchedule, GameConfig, Horizon};
use crate::error::{Error, Result};
use crate::regret::evaluate;
use crate::scalar::Scalar;

fn check_alpha<S: Scalar>(alpha: S) -> Result<()> {
    if !(alpha > S::zero()) || !alpha.is_finite() {
        return Err(Error::DomainError {
            detail: format!("alpha must be positive and finite, got {}", alpha.as_f64()),
        });
    }
    Ok(())
}

/// Learning rate implied by `alpha` under the given horizon:
/// `ln(1 + alpha/sqrt(T))` (finite) or `ln(1 + alpha sqrt(delta))`
/// (geometric). Strictly positive for positive `alpha`.
pub fn alpha_to_eta<S: Scalar>(alpha: S, horizon: &Horizon<S>) -> Result<S> {
    check_alpha(alpha)?;
    horizon.validate()?;
    Ok(match *horizon {
        Horizon::Finite { steps } => (alpha / S::from_count(steps).sqrt()).ln_1p(),
        Horizon::Geometric { stop_prob } => (alpha * stop_prob.sqrt()).ln_1p(),
    })
}

/// First-order estimate of the looping-phase regret of the loop-then-straight
/// construction at rate `alpha`: `alpha sqrt(T)/8`, damped by `1 - 1/k^2`
/// when `k` is odd (the unbalanced split loses the tie value on one side).
pub fn finite_loop_estimate<S: Scalar>(alpha: S, t: u64, k: u32) -> Result<S> {
    check_alpha(alpha)?;
    if k < 2 {
        return Err(Error::BadExpertCount { k });
    }
    let base = alpha * S::from_count(t).sqrt() / S::of(8.0);
    Ok(if k % 2 == 0 {
        base
    } else {
        let kk = S::from_count(k as u64);
        base * (S::one() - S::one() / (kk * kk))
    })
}

/// First-order estimate of the straight-phase regret over `straight_len`
/// steps: `(sqrt(T)/alpha) * [ln k - ln(1 + (k-1) e^{-l alpha/sqrt(T)})]`,
/// tending to `(sqrt(T)/alpha) ln k` as the phase lengthens.
pub fn finite_straight_estimate<S: Scalar>(
    alpha: S,
    t: u64,
    k: u32,
    straight_len: u64,
) -> Result<S> {
    check_alpha(alpha)?;
    if k < 2 {
        return Err(Error::BadExpertCount { k });
    }
    let sqrt_t = S::from_count(t).sqrt();
    let km1 = S::from_count((k - 1) as u64);
    let decay = (-alpha * S::from_count(straight_len) / sqrt_t).exp();
    let ln_k = S::from_count(k as u64).ln();
    Ok(sqrt_t / alpha * (ln_k - (km1 * decay).ln_1p()))
}

/// The `alpha` balancing the loop and straight estimates: `sqrt(8 ln k)` for
/// even `k`, `sqrt(8 ln k / (1 - 1/k^2))` for odd `k`.
pub fn optimal_alpha_finite<S: Scalar>(k: u32) -> Result<S> {
    if k < 2 {
        return Err(Error::BadExpertCount { k });
    }
    let ln_k = S::from_count(k as u64).ln();
    let eight = S::of(8.0);
    Ok(if k % 2 == 0 {
        (eight * ln_k).sqrt()
    } else {
        let kk = S::from_count(k as u64);
        (eight * ln_k / (S::one() - S::one() / (kk * kk))).sqrt()
    })
}

/// Asymptotic improvement factor of the randomized loop-count family over
/// the deterministic one: the mean of `sqrt(1 - x)` on the unit interval.
pub fn lsrand_factor<S: Scalar>() -> S {
    S::of(2.0 / 3.0)
}

/// Improvement factor of the looping mixture at weight `p`:
/// `(2/(3 sqrt(p))) (1 - (1-p)^{3/2})`. Recovers [`lsrand_factor`] at
/// `p = 1`.
pub fn lsrandpp_factor<S: Scalar>(p: S) -> Result<S> {
    let pf = p.as_f64();
    if !(pf > 0.0 && pf <= 1.0) {
        return Err(Error::BadProbability { p: pf });
    }
    let two_thirds = S::of(2.0 / 3.0);
    Ok(two_thirds / p.sqrt() * (S::one() - (S::one() - p).powf(S::of(1.5))))
}

/// Maximizes [`lsrandpp_factor`] over the unit interval; the optimum sits
/// near `p = 0.866` with factor just above `0.68`.
pub fn optimize_mix_p<S: Scalar>() -> Result<(S, S)> {
    let (p, neg, _) =
        golden_min(|p| Ok(-lsrandpp_factor::<S>(p)?), S::of(1e-9), S::one(), 1e-10)?;
    Ok((p, -neg))
}

fn check_gamma<S: Scalar>(gamma: S) -> Result<()> {
    let g = gamma.as_f64();
    if !(0.5..=1.0).contains(&g) {
        return Err(Error::DomainError {
            detail: format!("gamma must lie in [1/2, 1], got {g}"),
        });
    }
    Ok(())
}

/// Normalized geometric regret of straight-then-loop play in the `(alpha,
/// gamma)` parametrization: `ln(2 gamma)/alpha + (alpha/2) gamma (1 -
/// gamma)`, where `gamma` encodes the loop depth.
pub fn h_function<S: Scalar>(alpha: S, gamma: S) -> Result<S> {
    check_alpha(alpha)?;
    check_gamma(gamma)?;
    let two = S::of(2.0);
    Ok((two * gamma).ln() / alpha + alpha / two * gamma * (S::one() - gamma))
}

/// The `gamma` maximizing [`h_function`] at fixed `alpha`: the positive root
/// `(1/2 + sqrt(1/4 + 4/alpha^2))/2`, clamped to 1 (the root exceeds 1 for
/// `alpha <= sqrt(2)`).
pub fn gamma_star<S: Scalar>(alpha: S) -> Result<S> {
    check_alpha(alpha)?;
    let quarter = S::of(0.25);
    let root = (S::of(0.5) + (quarter + S::of(4.0) / (alpha * alpha)).sqrt()) / S::of(2.0);
    Ok(root.min(S::one()))
}

/// Stationary point of the geometric minimax problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: serde::de::DeserializeOwned"))]
pub struct GeometricSolution<S> {
    pub alpha_star: S,
    pub gamma_star: S,
    pub h_star: S,
    /// Loop-depth scale: the optimal straight prefix is `beta_star /
    /// sqrt(delta)` steps.
    pub beta_star: S,
    /// Residuals of the two stationarity equations at the solution.
    pub residuals: [S; 2],
}

/// Solves the stationarity system of [`h_function`] — `alpha^2 = 2 ln(2
/// gamma)/(gamma(1-gamma))` and `alpha^2 = 1/(gamma(gamma-1/2))` — by
/// bisecting their difference in `gamma` on `(1/2, 1)`, then recovers
/// `alpha`, the saddle value, and the loop-depth scale `beta = ln(gamma/(1 -
/// gamma))/alpha`. The solve runs in `f64` and converts at the end.
pub fn solve_geometric_system<S: Scalar>() -> Result<GeometricSolution<S>> {
    let g = |gamma: f64| {
        2.0 * (2.0 * gamma).ln() * gamma * (gamma - 0.5) - gamma * (1.0 - gamma)
    };
    let (mut lo, mut hi) = (0.5 + 1e-9, 1.0 - 1e-12);
    let (g_lo, g_hi) = (g(lo), g(hi));
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::NoRoot {
            detail: format!("no sign change on ({lo}, {hi}): g = {g_lo}, {g_hi}"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gamma = 0.5 * (lo + hi);
    let alpha = (1.0 / (gamma * (gamma - 0.5))).sqrt();
    let h = (2.0 * gamma).ln() / alpha + alpha / 2.0 * gamma * (1.0 - gamma);
    let beta = (gamma / (1.0 - gamma)).ln() / alpha;
    let residuals = [
        alpha * alpha - 2.0 * (2.0 * gamma).ln() / (gamma * (1.0 - gamma)),
        alpha * alpha - 1.0 / (gamma * (gamma - 0.5)),
    ];
    // the saddle must beat the clamped boundary candidate h(sqrt(2), 1)
    let boundary = 2.0f64.ln() / 2.0f64.sqrt();
    if !(h < boundary) {
        return Err(Error::NoRoot {
            detail: format!("saddle value {h} does not beat the boundary {boundary}"),
        });
    }
    Ok(GeometricSolution {
        alpha_star: S::of(alpha),
        gamma_star: S::of(gamma),
        h_star: S::of(h),
        beta_star: S::of(beta),
        residuals: [S::of(residuals[0]), S::of(residuals[1])],
    })
}

/// Outcome of [`optimize_eta`]: the minimizing `alpha`, the regret there,
/// and whether the objective was flat across the whole bracket (in which
/// case `alpha` is just a point of the final bracket, not meaningful).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: serde::de::DeserializeOwned"))]
pub struct EtaOptimum<S> {
    pub alpha: S,
    pub regret: S,
    pub degenerate: bool,
}

/// Golden-section search for a minimum of a unimodal objective, with a
/// relative bracket-width stopping rule. Returns the best evaluated point,
/// its value, and a flag marking an objective flat to within rounding.
fn golden_min<S: Scalar>(
    mut f: impl FnMut(S) -> Result<S>,
    lo: S,
    hi: S,
    rel_tol: f64,
) -> Result<(S, S, bool)> {
    let inv_phi = S::of(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let (mut seen_min, mut seen_max) = (fc.min(fd), fc.max(fd));
    for _ in 0..200 {
        if (b - a).as_f64() <= rel_tol * b.as_f64().abs().max(1.0) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
        seen_min = seen_min.min(fc.min(fd));
        seen_max = seen_max.max(fc.max(fd));
    }
    let (x, v) = if fc <= fd { (c, fc) } else { (d, fd) };
    let degenerate =
        (seen_max - seen_min).as_f64() <= 1e-12 * seen_max.as_f64().abs().max(1.0);
    Ok((x, v, degenerate))
}

/// Minimizes the exact regret over the learning rate, searching in `alpha`
/// on `bracket` by golden section (relative tolerance `1e-4`). The
/// objective is the worst case over `advs` — pass one adversary for a plain
/// minimization, several for a minimax — each evaluated exactly under
/// `cfg`'s horizon with the rate [`alpha_to_eta`] implies.
pub fn optimize_eta<S: Scalar>(
    advs: &[AdversarySpec],
    cfg: &GameConfig<S>,
    bracket: (f64, f64),
) -> Result<EtaOptimum<S>> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BadBracket { lo, hi });
    }
    if advs.is_empty() {
        return Err(Error::DomainError { detail: "no adversaries to optimize against".into() });
    }
    let objective = |alpha: S| -> Result<S> {
        let eta = alpha_to_eta(alpha, &cfg.horizon)?;
        let sched = EtaSchedule::single(eta);
        let mut worst = S::neg_infinity();
        for adv in advs {
            let r = evaluate(adv, &sched, cfg, None)?.regret;
            worst = worst.max(r);
        }
        Ok(worst)
    };
    let (alpha, regret, degenerate) = golden_min(objective, S::of(lo), S::of(hi), 1e-4)?;
    if !regret.is_finite() {
        return Err(Error::DomainError {
            detail: format!("objective not finite at alpha {}", alpha.as_f64()),
        });
    }
    Ok(EtaOptimum { alpha, regret, degenerate })
}

/// Least-squares fit of `normalized(T) = c0 + c1 * T^{-1/4}` through
/// `(T, normalized)` samples; returns the limit `c0` and the largest
/// absolute residual. The correction power is fixed: fitting it from a
/// handful of points is ill-conditioned.
pub fn asymptotic_extrapolate<S: Scalar>(samples: &[(S, S)]) -> Result<(S, S)> {
    if samples.len() < 3 {
        return Err(Error::InsufficientSamples { got: samples.len(), need: 3 });
    }
    let mut distinct: Vec<f64> = Vec::new();
    for &(t, _) in samples {
        let tf = t.as_f64();
        if !(tf > 0.0) {
            return Err(Error::DomainError {
                detail: format!("horizon sample {tf} must be positive"),
            });
        }
        if !distinct.contains(&tf) {
            distinct.push(tf);
        }
    }
    if distinct.len() < 2 {
        return Err(Error::InsufficientSamples { got: distinct.len(), need: 2 });
    }
    let n = S::from_count(samples.len() as u64);
    let (mut sx, mut sy, mut sxx, mut sxy) = (S::zero(), S::zero(), S::zero(), S::zero());
    for &(t, y) in samples {
        let x = t.powf(S::of(-0.25));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let c1 = (n * sxy - sx * sy) / denom;
    let c0 = (sy - c1 * sx) / n;
    let mut worst = S::zero();
    for &(t, y) in samples {
        let x = t.powf(S::of(-0.25));
        worst = worst.max((y - (c0 + c1 * x)).abs());
    }
    Ok((c0, worst))
}
