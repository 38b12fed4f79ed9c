//! Crate-wide error type.
//!
//! Variant names are load-bearing: the CLI prints them verbatim on stderr and
//! maps them onto exit codes, and tests match on them. Payloads carry the
//! offending values as plain `f64`/integers so the enum stays non-generic.

use std::fmt;

/// Everything that can fail while validating configuration, constructing
/// adversary scripts, or evaluating regret.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Horizon is unusable: finite with `T == 0`, geometric with a stop
    /// probability outside `(0, 1]`, or the wrong horizon kind for an operation.
    BadHorizon { detail: String },
    /// Fewer than two experts, or a script built for a different expert count.
    BadExpertCount { k: u32 },
    /// A schedule declared nonincreasing has a rate that rises at `step`.
    NonMonotoneSchedule { step: u64 },
    /// Weights of a rate distribution are negative, empty, or do not sum to 1.
    BadDistribution { detail: String },
    /// A rate in a schedule is negative.
    NegativeRate { rate: f64 },
    /// A rule's piece list is malformed (empty, unsorted, or not starting at 1).
    BadRateRule { detail: String },
    /// The schedule has no rate defined at the queried step.
    ScheduleDomainError { step: u64 },
    /// A gain ledger is inconsistent with the step it is queried at.
    BadLedger { detail: String },
    /// A reduced game state violates its own invariants.
    BadGapState { detail: String },
    /// Equal-split looping requested for an odd expert count.
    OddWithoutSplit { k: u32 },
    /// An odd-k construction was asked for an even expert count.
    EvenK { k: u32 },
    /// A straight-line length does not fit the horizon.
    BadLength { detail: String },
    /// The horizon is too short to host even one randomized script.
    TooShort { t: u64, need: u64 },
    /// A probability parameter lies outside its legal interval.
    BadProbability { p: f64 },
    /// Script length and finite horizon disagree.
    LengthMismatch { script_len: u64, horizon: u64 },
    /// `T − ℓ` must be even so the looping phase closes.
    ParityError { t: u64, straight_len: u64 },
    /// Stop probability outside `(0, 1]` passed to a geometric evaluator.
    BadDelta { delta: f64 },
    /// A tolerance that must be positive is not.
    NonPositiveTolerance { tol: f64 },
    /// The request exceeds a resource limit (state space or work cap).
    TooLarge { limit: u64, requested: u64 },
    /// An iterative solver ran out of iterations.
    NoConvergence { iterations: u64 },
    /// A bracketing solver found no sign change.
    NoRoot { detail: String },
    /// A search bracket is empty, inverted, or nonpositive.
    BadBracket { lo: f64, hi: f64 },
    /// Too few (or too few distinct) samples for a fit.
    InsufficientSamples { got: usize, need: usize },
    /// An argument lies outside the mathematical domain of the function.
    DomainError { detail: String },
    /// The gap-state domain of a value iteration is too small for the policy.
    DomainTooSmall { d_max: u64 },
    /// Text input (adversary grammar, schedule spec, CSV row) failed to parse.
    ParseError { detail: String },
    /// A JSON document carries the wrong schema tag.
    SchemaMismatch { found: String },
}

impl Error {
    /// Stable variant name, printed by the CLI and matched by tests.
    pub fn name(&self) -> &'static str {
        match self {
            Error::BadHorizon { .. } => "BadHorizon",
            Error::BadExpertCount { .. } => "BadExpertCount",
            Error::NonMonotoneSchedule { .. } => "NonMonotoneSchedule",
            Error::BadDistribution { .. } => "BadDistribution",
            Error::NegativeRate { .. } => "NegativeRate",
            Error::BadRateRule { .. } => "BadRateRule",
            Error::ScheduleDomainError { .. } => "ScheduleDomainError",
            Error::BadLedger { .. } => "BadLedger",
            Error::BadGapState { .. } => "BadGapState",
            Error::OddWithoutSplit { .. } => "OddWithoutSplit",
            Error::EvenK { .. } => "EvenK",
            Error::BadLength { .. } => "BadLength",
            Error::TooShort { .. } => "TooShort",
            Error::BadProbability { .. } => "BadProbability",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ParityError { .. } => "ParityError",
            Error::BadDelta { .. } => "BadDelta",
            Error::NonPositiveTolerance { .. } => "NonPositiveTolerance",
            Error::TooLarge { .. } => "TooLarge",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NoRoot { .. } => "NoRoot",
            Error::BadBracket { .. } => "BadBracket",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
            Error::DomainError { .. } => "DomainError",
            Error::DomainTooSmall { .. } => "DomainTooSmall",
            Error::ParseError { .. } => "ParseError",
            Error::SchemaMismatch { .. } => "SchemaMismatch",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name())?;
        match self {
            Error::BadHorizon { detail } => write!(f, "{detail}"),
            Error::BadExpertCount { k } => write!(f, "need at least 2 experts, got {k}"),
            Error::NonMonotoneSchedule { step } => {
                write!(f, "rate increases at step {step} in a nonincreasing schedule")
            }
            Error::BadDistribution { detail } => write!(f, "{detail}"),
            Error::NegativeRate { rate } => write!(f, "rate {rate} is negative"),
            Error::BadRateRule { detail } => write!(f, "{detail}"),
            Error::ScheduleDomainError { step } => {
                write!(f, "schedule defines no rate at step {step}")
            }
            Error::BadLedger { detail } => write!(f, "{detail}"),
            Error::BadGapState { detail } => write!(f, "{detail}"),
            Error::OddWithoutSplit { k } => {
                write!(f, "equal split needs even k, got {k}; use the (m, m+1) split")
            }
            Error::EvenK { k } => write!(f, "odd expert count required, got {k}"),
            Error::BadLength { detail } => write!(f, "{detail}"),
            Error::TooShort { t, need } => {
                write!(f, "horizon {t} too short, need at least {need}")
            }
            Error::BadProbability { p } => write!(f, "probability {p} outside its interval"),
            Error::LengthMismatch { script_len, horizon } => {
                write!(f, "script has {script_len} steps but the horizon is {horizon}")
            }
            Error::ParityError { t, straight_len } => {
                write!(f, "T - l = {} - {} is odd", t, straight_len)
            }
            Error::BadDelta { delta } => write!(f, "stop probability {delta} outside (0, 1]"),
            Error::NonPositiveTolerance { tol } => write!(f, "tolerance {tol} must be > 0"),
            Error::TooLarge { limit, requested } => {
                write!(f, "requested {requested} exceeds the limit {limit}")
            }
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::NoRoot { detail } => write!(f, "{detail}"),
            Error::BadBracket { lo, hi } => write!(f, "bad bracket [{lo}, {hi}]"),
            Error::InsufficientSamples { got, need } => {
                write!(f, "got {got} samples, need {need}")
            }
            Error::DomainError { detail } => write!(f, "{detail}"),
            Error::DomainTooSmall { d_max } => {
                write!(f, "lag probability still above tolerance at gap {d_max}")
            }
            Error::ParseError { detail } => write!(f, "{detail}"),
            Error::SchemaMismatch { found } => {
                write!(f, "expected schema tag {:?}, found {found:?}", crate::domain::SCHEMA_TAG)
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
