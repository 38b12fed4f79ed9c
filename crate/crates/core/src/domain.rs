//! Game configuration, rate schedules, reduced game state, and regret reports.
//!
//! Wire formats: every JSON document produced or accepted here carries a
//! `"schema": "regret-forge/1"` tag. Numbers are serialized in the shortest
//! form that round-trips the underlying bits (up to 17 significant digits),
//! which is what `serde_json` and `Display` emit for `f64`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Schema tag stamped on all JSON documents.
pub const SCHEMA_TAG: &str = "regret-forge/1";

/// Relative tolerance for the `regret = loop_part + straight_part` invariant.
pub const DECOMPOSITION_RTOL: f64 = 1e-9;

/// Tolerance for probability-weight normalization checks.
pub const WEIGHT_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Horizon and game configuration
// ---------------------------------------------------------------------------

/// Either a fixed number of steps or a memoryless stopping time: after each
/// step the game ends with probability `stop_prob`, so step t carries weight
/// `(1 - stop_prob)^t` in expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub enum Horizon<S> {
    Finite { steps: u64 },
    Geometric { stop_prob: S },
}

impl<S: Scalar> Horizon<S> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Horizon::Finite { steps } => {
                if *steps == 0 {
                    return Err(Error::BadHorizon { detail: "finite horizon needs T >= 1".into() });
                }
            }
            Horizon::Geometric { stop_prob } => {
                let d = stop_prob.as_f64();
                if !(d > 0.0 && d <= 1.0) {
                    return Err(Error::BadHorizon {
                        detail: format!("stop probability {d} outside (0, 1]"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn finite_steps(&self) -> Result<u64> {
        match self {
            Horizon::Finite { steps } => Ok(*steps),
            Horizon::Geometric { .. } => {
                Err(Error::BadHorizon { detail: "finite horizon required".into() })
            }
        }
    }

    pub fn stop_prob(&self) -> Result<S> {
        match self {
            Horizon::Geometric { stop_prob } => Ok(*stop_prob),
            Horizon::Finite { .. } => {
                Err(Error::BadHorizon { detail: "geometric horizon required".into() })
            }
        }
    }

    /// Scale factor turning a raw regret into its horizon-free normal form:
    /// `R/sqrt(T)` for finite horizons, `sqrt(delta) * R` for geometric ones.
    pub fn normalize(&self, regret: S) -> S {
        match self {
            Horizon::Finite { steps } => regret / S::from_count(*steps).sqrt(),
            Horizon::Geometric { stop_prob } => regret * stop_prob.sqrt(),
        }
    }
}

/// Horizon plus expert count; the pair every evaluator needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct GameConfig<S> {
    pub horizon: Horizon<S>,
    pub num_experts: u32,
}

impl<S: Scalar> GameConfig<S> {
    pub fn new(horizon: Horizon<S>, num_experts: u32) -> Self {
        GameConfig { horizon, num_experts }
    }

    pub fn validate(&self) -> Result<()> {
        self.horizon.validate()?;
        if self.num_experts < 2 {
            return Err(Error::BadExpertCount { k: self.num_experts });
        }
        Ok(())
    }
}

/// Validates the full (config, schedule) pair, reporting the first violated
/// invariant: horizon, then expert count, then the schedule's own rules.
pub fn validate_config<S: Scalar>(cfg: &GameConfig<S>, sched: &EtaSchedule<S>) -> Result<()> {
    cfg.validate()?;
    sched.validate()
}

// ---------------------------------------------------------------------------
// Rate schedules
// ---------------------------------------------------------------------------

/// Deterministic rate rule: a total map from step `t >= 1` to a learning rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub enum RateRule<S> {
    Constant { rate: S },
    /// Right-open constant pieces; `pieces[i]` applies from `from_step` until
    /// the next piece starts. The first piece must start at step 1.
    Piecewise { pieces: Vec<RatePiece<S>> },
    /// `scale / sqrt(t)`.
    InverseSqrt { scale: S },
    /// `rates[t - 1]`; queries beyond the table are a domain error.
    Table { rates: Vec<S> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct RatePiece<S> {
    pub from_step: u64,
    pub rate: S,
}

impl<S: Scalar> RateRule<S> {
    pub fn rate_at(&self, step: u64) -> Result<S> {
        if step == 0 {
            return Err(Error::ScheduleDomainError { step });
        }
        match self {
            RateRule::Constant { rate } => Ok(*rate),
            RateRule::Piecewise { pieces } => {
                let idx = pieces.partition_point(|p| p.from_step <= step);
                if idx == 0 {
                    return Err(Error::ScheduleDomainError { step });
                }
                Ok(pieces[idx - 1].rate)
            }
            RateRule::InverseSqrt { scale } => Ok(*scale / S::from_count(step).sqrt()),
            RateRule::Table { rates } => rates
                .get((step - 1) as usize)
                .copied()
                .ok_or(Error::ScheduleDomainError { step }),
        }
    }

    /// Structural checks that do not depend on the family: shapes well formed,
    /// rates nonnegative.
    fn validate_shape(&self) -> Result<()> {
        match self {
            RateRule::Constant { rate } => check_rate(*rate),
            RateRule::Piecewise { pieces } => {
                if pieces.is_empty() {
                    return Err(Error::BadRateRule { detail: "piecewise rule has no pieces".into() });
                }
                if pieces[0].from_step != 1 {
                    return Err(Error::BadRateRule {
                        detail: "first piece must start at step 1".into(),
                    });
                }
                for w in pieces.windows(2) {
                    if w[1].from_step <= w[0].from_step {
                        return Err(Error::BadRateRule {
                            detail: format!("piece starts not ascending at step {}", w[1].from_step),
                        });
                    }
                }
                pieces.iter().try_for_each(|p| check_rate(p.rate))
            }
            RateRule::InverseSqrt { scale } => check_rate(*scale),
            RateRule::Table { rates } => {
                if rates.is_empty() {
                    return Err(Error::BadRateRule { detail: "rate table is empty".into() });
                }
                rates.iter().try_for_each(|r| check_rate(*r))
            }
        }
    }

    /// Nonincreasing check over the rule's own breakpoints. Total rather than
    /// per-query: the representable rules expose every transition.
    fn validate_nonincreasing(&self) -> Result<()> {
        match self {
            RateRule::Constant { .. } | RateRule::InverseSqrt { .. } => Ok(()),
            RateRule::Piecewise { pieces } => {
                for w in pieces.windows(2) {
                    if w[1].rate > w[0].rate {
                        return Err(Error::NonMonotoneSchedule { step: w[1].from_step });
                    }
                }
                Ok(())
            }
            RateRule::Table { rates } => {
                for (i, w) in rates.windows(2).enumerate() {
                    if w[1] > w[0] {
                        return Err(Error::NonMonotoneSchedule { step: i as u64 + 2 });
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_rate<S: Scalar>(rate: S) -> Result<()> {
    if rate < S::zero() || !rate.is_finite() {
        return Err(Error::NegativeRate { rate: rate.as_f64() });
    }
    Ok(())
}

/// One atom of a random rate: play rate `rate` with probability `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct RateWeight<S> {
    pub rate: S,
    pub weight: S,
}

/// Finite weighted support for the random family, either shared by all steps
/// or given per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub enum RateDist<S> {
    Stationary { support: Vec<RateWeight<S>> },
    PerStep { steps: Vec<Vec<RateWeight<S>>> },
}

impl<S: Scalar> RateDist<S> {
    pub fn support_at(&self, step: u64) -> Result<&[RateWeight<S>]> {
        if step == 0 {
            return Err(Error::ScheduleDomainError { step });
        }
        match self {
            RateDist::Stationary { support } => Ok(support),
            RateDist::PerStep { steps } => steps
                .get((step - 1) as usize)
                .map(Vec::as_slice)
                .ok_or(Error::ScheduleDomainError { step }),
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |support: &[RateWeight<S>]| -> Result<()> {
            if support.is_empty() {
                return Err(Error::BadDistribution { detail: "empty rate support".into() });
            }
            let mut total = 0.0f64;
            for rw in support {
                check_rate(rw.rate)?;
                let w = rw.weight.as_f64();
                if w < 0.0 || !w.is_finite() {
                    return Err(Error::BadDistribution {
                        detail: format!("negative or nonfinite weight {w}"),
                    });
                }
                total += w;
            }
            if (total - 1.0).abs() > WEIGHT_TOL {
                return Err(Error::BadDistribution {
                    detail: format!("weights sum to {total}, not 1"),
                });
            }
            Ok(())
        };
        match self {
            RateDist::Stationary { support } => check(support),
            RateDist::PerStep { steps } => {
                if steps.is_empty() {
                    return Err(Error::BadDistribution { detail: "no per-step supports".into() });
                }
                steps.iter().try_for_each(|s| check(s))
            }
        }
    }
}

/// Learning-rate schedule of the forecaster.
///
/// `Single` is a constant rate; `Decreasing` promises a nonincreasing rule and
/// is validated against it; `Arbitrary` is any rule; `Random` draws a rate per
/// step from a finite weighted support and plays the induced mixture of
/// softmax policies (draw-then-play semantics).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub enum EtaSchedule<S> {
    Single { constant_rate: S },
    Decreasing { rate_fn: RateRule<S> },
    Arbitrary { rate_fn: RateRule<S> },
    Random { rate_dist: RateDist<S> },
}

/// Borrowed view of the rate mixture at one step. Deterministic families are
/// one-point mixtures, so evaluators can treat every family uniformly.
#[derive(Debug, Clone, Copy)]
pub enum RateMixture<'a, S> {
    One(S),
    Weighted(&'a [RateWeight<S>]),
}

impl<'a, S: Scalar> RateMixture<'a, S> {
    /// Expected value of `f` over the mixture.
    pub fn expect<F: FnMut(S) -> S>(&self, mut f: F) -> S {
        match self {
            RateMixture::One(rate) => f(*rate),
            RateMixture::Weighted(support) => {
                let mut acc = S::zero();
                for rw in *support {
                    acc += rw.weight * f(rw.rate);
                }
                acc
            }
        }
    }
}

impl<S: Scalar> EtaSchedule<S> {
    pub fn validate(&self) -> Result<()> {
        match self {
            EtaSchedule::Single { constant_rate } => check_rate(*constant_rate),
            EtaSchedule::Decreasing { rate_fn } => {
                rate_fn.validate_shape()?;
                rate_fn.validate_nonincreasing()
            }
            EtaSchedule::Arbitrary { rate_fn } => rate_fn.validate_shape(),
            EtaSchedule::Random { rate_dist } => rate_dist.validate(),
        }
    }

    /// The rate mixture in force at step `t`.
    pub fn mixture_at(&self, step: u64) -> Result<RateMixture<'_, S>> {
        match self {
            EtaSchedule::Single { constant_rate } => {
                if step == 0 {
                    return Err(Error::ScheduleDomainError { step });
                }
                Ok(RateMixture::One(*constant_rate))
            }
            EtaSchedule::Decreasing { rate_fn } | EtaSchedule::Arbitrary { rate_fn } => {
                Ok(RateMixture::One(rate_fn.rate_at(step)?))
            }
            EtaSchedule::Random { rate_dist } => {
                Ok(RateMixture::Weighted(rate_dist.support_at(step)?))
            }
        }
    }

    /// True when the mixture is the same at every step, unlocking closed-form
    /// evaluation paths.
    pub fn is_time_invariant(&self) -> bool {
        matches!(
            self,
            EtaSchedule::Single { .. }
                | EtaSchedule::Decreasing { rate_fn: RateRule::Constant { .. } }
                | EtaSchedule::Arbitrary { rate_fn: RateRule::Constant { .. } }
                | EtaSchedule::Random { rate_dist: RateDist::Stationary { .. } }
        )
    }

    /// Piecewise-constant view when one exists, for the counting fast path.
    pub(crate) fn piecewise_view(&self) -> Option<Vec<RatePiece<S>>> {
        match self {
            EtaSchedule::Single { constant_rate } => {
                Some(vec![RatePiece { from_step: 1, rate: *constant_rate }])
            }
            EtaSchedule::Decreasing { rate_fn } | EtaSchedule::Arbitrary { rate_fn } => {
                match rate_fn {
                    RateRule::Constant { rate } => {
                        Some(vec![RatePiece { from_step: 1, rate: *rate }])
                    }
                    RateRule::Piecewise { pieces } => Some(pieces.clone()),
                    _ => None,
                }
            }
            EtaSchedule::Random { .. } => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            EtaSchedule::Single { .. } => "single",
            EtaSchedule::Decreasing { .. } => "decreasing",
            EtaSchedule::Arbitrary { .. } => "arbitrary",
            EtaSchedule::Random { .. } => "random",
        }
    }

    /// Constant-rate convenience constructor.
    pub fn single(rate: S) -> Self {
        EtaSchedule::Single { constant_rate: rate }
    }
}

// ---------------------------------------------------------------------------
// Gains, reduced state, reports
// ---------------------------------------------------------------------------

/// Cumulative gains of each expert. Per-step gains are 0/1, so at step `t`
/// every entry is at most `t - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainLedger {
    pub gains: Vec<u64>,
}

impl GainLedger {
    pub fn new(gains: Vec<u64>) -> Self {
        GainLedger { gains }
    }

    pub fn num_experts(&self) -> usize {
        self.gains.len()
    }

    pub fn max_gain(&self) -> u64 {
        self.gains.iter().copied().max().unwrap_or(0)
    }

    /// Consistency with being queried at step `t` (1-based).
    pub fn validate_at(&self, step: u64) -> Result<()> {
        if step == 0 {
            return Err(Error::BadLedger { detail: "steps are 1-based".into() });
        }
        if self.gains.len() < 2 {
            return Err(Error::BadExpertCount { k: self.gains.len() as u32 });
        }
        if self.max_gain() > step - 1 {
            return Err(Error::BadLedger {
                detail: format!("gain {} exceeds step - 1 = {}", self.max_gain(), step - 1),
            });
        }
        Ok(())
    }
}

/// Which side of the reduced two-team game currently leads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leader {
    TeamA,
    TeamB,
    /// One expert leads and the other `k - 1` share a single gain level.
    SingleExpert,
    Tied,
}

/// Reduced state of a team-structured game: the gap between the two gain
/// levels, who holds the upper one, and the team sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapState {
    pub gap: u64,
    pub leader: Leader,
    pub sizes: (u32, u32),
}

impl GapState {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.sizes;
        if a == 0 || b == 0 {
            return Err(Error::BadGapState { detail: "team sizes must be positive".into() });
        }
        if (self.leader == Leader::Tied) != (self.gap == 0) {
            return Err(Error::BadGapState { detail: "leader is Tied exactly when gap = 0".into() });
        }
        if self.leader == Leader::SingleExpert && a != 1 {
            return Err(Error::BadGapState {
                detail: "single-expert leader needs sizes (1, k - 1)".into(),
            });
        }
        Ok(())
    }
}

/// Exact expected regret with its loop/straight decomposition.
///
/// `normalized` is `regret/sqrt(T)` (finite) or `sqrt(delta)*regret`
/// (geometric). `truncation_bound` bounds the dropped tail of any truncated
/// series; it is 0 for fully closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "S: Serialize", deserialize = "S: Deserialize<'de>"))]
pub struct RegretReport<S> {
    pub regret: S,
    pub loop_part: S,
    pub straight_part: S,
    pub normalized: S,
    pub truncation_bound: S,
}

impl<S: Scalar> RegretReport<S> {
    /// Builds a report whose decomposition invariant holds by construction.
    pub fn from_parts(
        loop_part: S,
        straight_part: S,
        horizon: &Horizon<S>,
        truncation_bound: S,
    ) -> Self {
        let regret = loop_part + straight_part;
        RegretReport {
            regret,
            loop_part,
            straight_part,
            normalized: horizon.normalize(regret),
            truncation_bound,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.regret.as_f64();
        let parts = (self.loop_part + self.straight_part).as_f64();
        let scale = r.abs().max(parts.abs()).max(1e-300);
        if (r - parts).abs() > DECOMPOSITION_RTOL * scale {
            return Err(Error::DomainError {
                detail: format!("regret {r} does not match loop + straight = {parts}"),
            });
        }
        if self.truncation_bound < S::zero() {
            return Err(Error::DomainError { detail: "negative truncation bound".into() });
        }
        Ok(())
    }

    /// Weighted accumulation used when averaging reports over a distribution.
    pub fn scaled(&self, w: S) -> RegretReport<S> {
        RegretReport {
            regret: self.regret * w,
            loop_part: self.loop_part * w,
            straight_part: self.straight_part * w,
            normalized: self.normalized * w,
            truncation_bound: self.truncation_bound * w,
        }
    }
}

// ---------------------------------------------------------------------------
// Schema-tagged JSON documents
// ---------------------------------------------------------------------------

/// Wrapper attaching the schema tag to a serializable body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct Document<T> {
    pub schema: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Document<T> {
    pub fn new(body: T) -> Self {
        Document { schema: SCHEMA_TAG.to_string(), body }
    }
}

/// Serializes `body` as a tagged JSON document.
pub fn to_json<T: Serialize>(body: &T) -> String {
    let doc = Document { schema: SCHEMA_TAG.to_string(), body };
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

/// Parses a tagged JSON document, rejecting unknown schema versions.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let doc: Document<T> = serde_json::from_str(text)
        .map_err(|e| Error::ParseError { detail: format!("bad JSON document: {e}") })?;
    if doc.schema != SCHEMA_TAG {
        return Err(Error::SchemaMismatch { found: doc.schema });
    }
    Ok(doc.body)
}

// ---------------------------------------------------------------------------
// Compact textual schedule specs (CSV `eta_spec` column)
// ---------------------------------------------------------------------------

impl<S: Scalar> EtaSchedule<S> {
    /// Comma-free compact form for CSV rows. Together with the `family`
    /// column this round-trips through [`EtaSchedule::from_spec`].
    pub fn to_spec(&self) -> String {
        match self {
            EtaSchedule::Single { constant_rate } => format!("{constant_rate}"),
            EtaSchedule::Decreasing { rate_fn } | EtaSchedule::Arbitrary { rate_fn } => {
                rule_spec(rate_fn)
            }
            EtaSchedule::Random { rate_dist } => match rate_dist {
                RateDist::Stationary { support } => format!("mix:{}", support_spec(support)),
                RateDist::PerStep { steps } => {
                    let body: Vec<String> = steps.iter().map(|s| support_spec(s)).collect();
                    format!("steps:{}", body.join("|"))
                }
            },
        }
    }

    pub fn from_spec(family: &str, spec: &str) -> Result<Self> {
        match family {
            "single" => Ok(EtaSchedule::Single { constant_rate: parse_num(spec)? }),
            "decreasing" => Ok(EtaSchedule::Decreasing { rate_fn: parse_rule(spec)? }),
            "arbitrary" => Ok(EtaSchedule::Arbitrary { rate_fn: parse_rule(spec)? }),
            "random" => {
                if let Some(body) = spec.strip_prefix("mix:") {
                    Ok(EtaSchedule::Random {
                        rate_dist: RateDist::Stationary { support: parse_support(body)? },
                    })
                } else if let Some(body) = spec.strip_prefix("steps:") {
                    let steps = body
                        .split('|')
                        .map(parse_support)
                        .collect::<Result<Vec<_>>>()?;
                    Ok(EtaSchedule::Random { rate_dist: RateDist::PerStep { steps } })
                } else {
                    Err(Error::ParseError { detail: format!("bad random spec {spec:?}") })
                }
            }
            other => Err(Error::ParseError { detail: format!("unknown schedule family {other:?}") }),
        }
    }
}

fn rule_spec<S: Scalar>(rule: &RateRule<S>) -> String {
    match rule {
        RateRule::Constant { rate } => format!("{rate}"),
        RateRule::Piecewise { pieces } => {
            let body: Vec<String> =
                pieces.iter().map(|p| format!("{}={}", p.from_step, p.rate)).collect();
            format!("pw:{}", body.join(";"))
        }
        RateRule::InverseSqrt { scale } => format!("invsqrt:{scale}"),
        RateRule::Table { rates } => {
            let body: Vec<String> = rates.iter().map(|r| format!("{r}")).collect();
            format!("table:{}", body.join(";"))
        }
    }
}

fn parse_rule<S: Scalar>(spec: &str) -> Result<RateRule<S>> {
    if let Some(body) = spec.strip_prefix("pw:") {
        let pieces = body
            .split(';')
            .map(|item| {
                let (step, rate) = item.split_once('=').ok_or_else(|| Error::ParseError {
                    detail: format!("bad piece {item:?}, expected step=rate"),
                })?;
                Ok(RatePiece {
                    from_step: step.parse().map_err(|_| Error::ParseError {
                        detail: format!("bad step index {step:?}"),
                    })?,
                    rate: parse_num(rate)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RateRule::Piecewise { pieces })
    } else if let Some(body) = spec.strip_prefix("invsqrt:") {
        Ok(RateRule::InverseSqrt { scale: parse_num(body)? })
    } else if let Some(body) = spec.strip_prefix("table:") {
        let rates = body.split(';').map(parse_num).collect::<Result<Vec<_>>>()?;
        Ok(RateRule::Table { rates })
    } else {
        Ok(RateRule::Constant { rate: parse_num(spec)? })
    }
}

fn support_spec<S: Scalar>(support: &[RateWeight<S>]) -> String {
    let body: Vec<String> =
        support.iter().map(|rw| format!("{}@{}", rw.rate, rw.weight)).collect();
    body.join(";")
}

fn parse_support<S: Scalar>(body: &str) -> Result<Vec<RateWeight<S>>> {
    body.split(';')
        .map(|item| {
            let (rate, weight) = item.split_once('@').ok_or_else(|| Error::ParseError {
                detail: format!("bad support atom {item:?}, expected rate@weight"),
            })?;
            Ok(RateWeight { rate: parse_num(rate)?, weight: parse_num(weight)? })
        })
        .collect()
}

fn parse_num<S: Scalar>(text: &str) -> Result<S> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::ParseError { detail: format!("bad number {text:?}") })?;
    Ok(S::of(v))
}
