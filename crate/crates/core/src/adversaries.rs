//! Adversary constructions: per-step gain scripts over team-structured
//! experts, named loop/straight compositions, and finite distributions over
//! scripts.
//!
//! Scripts are stored as normalized run-length segments rather than flat
//! action arrays, so a length-10^6 script is a handful of words and the
//! large randomized families can be enumerated lazily. The flat action view
//! is always available through [`AdversaryScript::actions`].
//!
//! Text form: whitespace-separated tokens `L*n` (n loop cycles), `H` (a lone
//! tie-advance), `S*n` (n straight steps), `I`/`I*n` (idle); named forms
//! `loop`, `straight`, `lsdet[:l]`, `lsrand[:l]`, `lsrand++:p[:l]`, `sl:l`
//! (geometric only); weighted mixtures as `w@tokens;w@tokens`.

use crate::error::{Error, Result};

/// What the adversary does at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    /// +1 gain to every expert in team A.
    AdvanceTeamA,
    /// +1 gain to every expert in team B.
    AdvanceTeamB,
    /// +1 gain to the designated expert (expert 0, in team A) only.
    AdvanceLeaderSingle,
    /// No gains this step.
    Idle,
}

/// Partition of the `k` experts into two teams; team A (which contains the
/// designated expert and is advanced first in loops) has size `team_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeamSplit {
    pub team_a: u32,
    pub team_b: u32,
}

impl TeamSplit {
    /// The default split: `(k/2, k/2)` for even `k`, `(m, m + 1)` for odd
    /// `k = 2m + 1` (the smaller party advances first).
    pub fn balanced(k: u32) -> Result<TeamSplit> {
        if k < 2 {
            return Err(Error::BadExpertCount { k });
        }
        Ok(TeamSplit { team_a: k / 2, team_b: k - k / 2 })
    }

    pub fn num_experts(&self) -> u32 {
        self.team_a + self.team_b
    }

    pub fn validate(&self) -> Result<()> {
        if self.team_a == 0 || self.team_b == 0 {
            return Err(Error::BadExpertCount { k: self.num_experts() });
        }
        Ok(())
    }
}

/// The balanced split for odd `k = 2m + 1`, rejecting even counts.
pub fn build_odd_split(k: u32) -> Result<TeamSplit> {
    if k % 2 == 0 {
        return Err(Error::EvenK { k });
    }
    TeamSplit::balanced(k)
}

/// Run-length segment of a script.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    /// `cycles` repetitions of (AdvanceTeamA, AdvanceTeamB).
    Loop { cycles: u64 },
    /// A lone AdvanceTeamA, closing an odd-length looping span.
    HalfLoop,
    /// `len` repetitions of AdvanceLeaderSingle.
    Straight { len: u64 },
    /// `len` idle steps.
    Idle { len: u64 },
}

impl Segment {
    pub fn step_count(&self) -> u64 {
        match self {
            Segment::Loop { cycles } => 2 * cycles,
            Segment::HalfLoop => 1,
            Segment::Straight { len } | Segment::Idle { len } => *len,
        }
    }
}

/// A deterministic finite gain script: a team split plus a normalized
/// segment list (adjacent segments of the same kind merged, empty ones
/// dropped), giving a canonical text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryScript {
    split: TeamSplit,
    segments: Vec<Segment>,
}

impl AdversaryScript {
    pub fn new(split: TeamSplit, segments: Vec<Segment>) -> Self {
        let mut norm: Vec<Segment> = Vec::with_capacity(segments.len());
        for seg in segments {
            if seg.step_count() == 0 {
                continue;
            }
            match (norm.last_mut(), seg) {
                (Some(Segment::Loop { cycles: a }), Segment::Loop { cycles: b }) => *a += b,
                (Some(Segment::Straight { len: a }), Segment::Straight { len: b }) => *a += b,
                (Some(Segment::Idle { len: a }), Segment::Idle { len: b }) => *a += b,
                _ => norm.push(seg),
            }
        }
        AdversaryScript { split, segments: norm }
    }

    pub fn split(&self) -> TeamSplit {
        self.split
    }

    pub fn num_experts(&self) -> u32 {
        self.split.num_experts()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Total number of steps.
    pub fn len(&self) -> u64 {
        self.segments.iter().map(Segment::step_count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Flat per-step action view.
    pub fn actions(&self) -> ActionIter<'_> {
        ActionIter { segments: &self.segments, seg: 0, pos: 0 }
    }

    /// `(loop_cycles, half_loops, straight_len, idle_len)`; these satisfy
    /// `2 * loops + halves + straight + idle = len()`.
    pub fn action_census(&self) -> (u64, u64, u64, u64) {
        let (mut loops, mut halves, mut straight, mut idle) = (0, 0, 0, 0);
        for seg in &self.segments {
            match seg {
                Segment::Loop { cycles } => loops += cycles,
                Segment::HalfLoop => halves += 1,
                Segment::Straight { len } => straight += len,
                Segment::Idle { len } => idle += len,
            }
        }
        (loops, halves, straight, idle)
    }

    /// Gap after each step, starting from 0: the gain of the designated
    /// expert's side minus the other team's, signed.
    pub fn gap_path(&self) -> Vec<i64> {
        let mut d = 0i64;
        self.actions()
            .map(|a| {
                match a {
                    StepAction::AdvanceTeamA | StepAction::AdvanceLeaderSingle => d += 1,
                    StepAction::AdvanceTeamB => d -= 1,
                    StepAction::Idle => {}
                }
                d
            })
            .collect()
    }

    /// Canonical token form, e.g. `"L*4 S*8"` or `"I L*3 S*2 I*4"`.
    pub fn to_text(&self) -> String {
        let tokens: Vec<String> = self
            .segments
            .iter()
            .map(|seg| match seg {
                Segment::Loop { cycles } => format!("L*{cycles}"),
                Segment::HalfLoop => "H".to_string(),
                Segment::Straight { len } => format!("S*{len}"),
                Segment::Idle { len: 1 } => "I".to_string(),
                Segment::Idle { len } => format!("I*{len}"),
            })
            .collect();
        tokens.join(" ")
    }

    /// Parses the token form with the balanced split for `k` experts.
    pub fn parse(text: &str, k: u32) -> Result<Self> {
        let split = TeamSplit::balanced(k)?;
        let mut segments = Vec::new();
        for token in text.split_whitespace() {
            segments.push(parse_token(token)?);
        }
        Ok(AdversaryScript::new(split, segments))
    }
}

fn parse_token(token: &str) -> Result<Segment> {
    let bad = || Error::ParseError { detail: format!("bad script token {token:?}") };
    let (head, count) = match token.split_once('*') {
        Some((head, n)) => (head, Some(n.parse::<u64>().map_err(|_| bad())?)),
        None => (token, None),
    };
    match (head, count) {
        ("L", n) => Ok(Segment::Loop { cycles: n.unwrap_or(1) }),
        ("S", n) => Ok(Segment::Straight { len: n.unwrap_or(1) }),
        ("I", n) => Ok(Segment::Idle { len: n.unwrap_or(1) }),
        ("H", None) => Ok(Segment::HalfLoop),
        _ => Err(bad()),
    }
}

/// Iterator over the flat action sequence of a script.
pub struct ActionIter<'a> {
    segments: &'a [Segment],
    seg: usize,
    pos: u64,
}

impl Iterator for ActionIter<'_> {
    type Item = StepAction;

    fn next(&mut self) -> Option<StepAction> {
        loop {
            let seg = self.segments.get(self.seg)?;
            if self.pos >= seg.step_count() {
                self.seg += 1;
                self.pos = 0;
                continue;
            }
            let action = match seg {
                Segment::Loop { .. } => {
                    if self.pos % 2 == 0 {
                        StepAction::AdvanceTeamA
                    } else {
                        StepAction::AdvanceTeamB
                    }
                }
                Segment::HalfLoop => StepAction::AdvanceTeamA,
                Segment::Straight { .. } => StepAction::AdvanceLeaderSingle,
                Segment::Idle { .. } => StepAction::Idle,
            };
            self.pos += 1;
            return Some(action);
        }
    }
}

// ---------------------------------------------------------------------------
// Finite constructions
// ---------------------------------------------------------------------------

/// `cycles` loop cycles with the equal split; odd `k` must come through
/// [`loop_with_split`] with an explicit split.
pub fn loop_primitive(k: u32, cycles: u64) -> Result<AdversaryScript> {
    if k % 2 != 0 {
        return Err(Error::OddWithoutSplit { k });
    }
    let split = TeamSplit::balanced(k)?;
    Ok(loop_with_split(split, cycles))
}

/// `cycles` loop cycles under an explicit split.
pub fn loop_with_split(split: TeamSplit, cycles: u64) -> AdversaryScript {
    AdversaryScript::new(split, vec![Segment::Loop { cycles }])
}

/// `len` straight steps: the designated expert advances alone.
pub fn straight_primitive(k: u32, len: u64) -> Result<AdversaryScript> {
    Ok(AdversaryScript::new(TeamSplit::balanced(k)?, vec![Segment::Straight { len }]))
}

/// Default straight length, `round(T^{3/4})`.
pub fn default_straight_len(t: u64) -> u64 {
    (t as f64).powf(0.75).round() as u64
}

/// Loop-then-straight script: `(T - l)/2` loop cycles followed by `l`
/// straight steps. When `l` is not given it defaults to `round(T^{3/4})`,
/// nudged by one (up first, down if that overshoots `T`) so `T - l` is even.
/// An explicit `l` of the wrong parity is an error rather than nudged.
pub fn build_lsdet(t: u64, k: u32, straight_len: Option<u64>) -> Result<AdversaryScript> {
    if t == 0 {
        return Err(Error::BadHorizon { detail: "loop-then-straight needs T >= 1".into() });
    }
    let l = match straight_len {
        Some(l) => {
            if l > t {
                return Err(Error::BadLength {
                    detail: format!("straight length {l} exceeds horizon {t}"),
                });
            }
            if (t - l) % 2 != 0 {
                return Err(Error::ParityError { t, straight_len: l });
            }
            l
        }
        None => {
            let mut l = default_straight_len(t).min(t);
            if (t - l) % 2 != 0 {
                l = if l < t { l + 1 } else { l - 1 };
            }
            l
        }
    };
    let split = TeamSplit::balanced(k)?;
    Ok(AdversaryScript::new(
        split,
        vec![Segment::Loop { cycles: (t - l) / 2 }, Segment::Straight { len: l }],
    ))
}

/// Pure looping for `t` steps: full cycles plus a trailing half cycle when
/// `t` is odd.
pub fn build_finite_loop(t: u64, k: u32) -> Result<AdversaryScript> {
    let split = TeamSplit::balanced(k)?;
    let mut segments = vec![Segment::Loop { cycles: t / 2 }];
    if t % 2 != 0 {
        segments.push(Segment::HalfLoop);
    }
    Ok(AdversaryScript::new(split, segments))
}

// ---------------------------------------------------------------------------
// Distributions over scripts
// ---------------------------------------------------------------------------

/// Shape of a distribution's support, used to pick evaluation strategies and
/// to enumerate large supports lazily.
#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    /// Materialized weighted support.
    Explicit,
    /// For each loop count `j < loop_max` and each side of a fair coin:
    /// `[Idle on tails] + j loop cycles + straight_len straight steps + Idle
    /// padding to length t`, all weighted `1/(2 * loop_max)`.
    Lsrand { t: u64, straight_len: u64, loop_max: u64 },
    /// The same support scaled by `mix_p`, plus weight `(1 - mix_p)/2` on
    /// each of pure looping and idle-then-pure-looping over `t` steps.
    LsrandPp { t: u64, straight_len: u64, loop_max: u64, mix_p: f64 },
}

/// A finite distribution over scripts of a common split.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryDistribution {
    split: TeamSplit,
    kind: DistKind,
    support: Vec<(AdversaryScript, f64)>,
}

impl AdversaryDistribution {
    /// Validating constructor for an explicit support.
    pub fn from_support(support: Vec<(AdversaryScript, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::BadDistribution { detail: "empty script support".into() });
        }
        let split = support[0].0.split();
        let mut total = 0.0f64;
        for (script, w) in &support {
            if script.split() != split {
                return Err(Error::BadDistribution {
                    detail: "scripts mix different team splits".into(),
                });
            }
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::BadDistribution { detail: format!("bad weight {w}") });
            }
            total += w;
        }
        if (total - 1.0).abs() > crate::domain::WEIGHT_TOL {
            return Err(Error::BadDistribution { detail: format!("weights sum to {total}") });
        }
        Ok(AdversaryDistribution { split, kind: DistKind::Explicit, support })
    }

    pub fn split(&self) -> TeamSplit {
        self.split
    }

    pub fn num_experts(&self) -> u32 {
        self.split.num_experts()
    }

    pub fn kind(&self) -> &DistKind {
        &self.kind
    }

    pub fn support_size(&self) -> u64 {
        match &self.kind {
            DistKind::Explicit => self.support.len() as u64,
            DistKind::Lsrand { loop_max, .. } => 2 * loop_max,
            DistKind::LsrandPp { loop_max, .. } => 2 * loop_max + 2,
        }
    }

    /// Enumerates `(script, weight)` pairs, generating them on demand for
    /// the named kinds so that huge supports never materialize at once.
    pub fn entries(&self) -> impl Iterator<Item = (AdversaryScript, f64)> + '_ {
        (0..self.support_size()).map(move |i| self.entry_at(i))
    }

    fn entry_at(&self, i: u64) -> (AdversaryScript, f64) {
        match &self.kind {
            DistKind::Explicit => self.support[i as usize].clone(),
            DistKind::Lsrand { t, straight_len, loop_max } => {
                let (j, tails) = (i / 2, i % 2 == 1);
                (
                    lsrand_script(self.split, *t, *straight_len, j, tails),
                    1.0 / (2 * loop_max) as f64,
                )
            }
            DistKind::LsrandPp { t, straight_len, loop_max, mix_p } => {
                if i < 2 * loop_max {
                    let (j, tails) = (i / 2, i % 2 == 1);
                    (
                        lsrand_script(self.split, *t, *straight_len, j, tails),
                        mix_p / (2 * loop_max) as f64,
                    )
                } else {
                    let script = if i == 2 * loop_max {
                        pure_loop_segments(self.split, *t, false)
                    } else {
                        pure_loop_segments(self.split, *t, true)
                    };
                    (script, (1.0 - mix_p) / 2.0)
                }
            }
        }
    }
}

fn lsrand_script(split: TeamSplit, t: u64, l: u64, j: u64, tails: bool) -> AdversaryScript {
    let lead = tails as u64;
    let pad = t - lead - 2 * j - l;
    AdversaryScript::new(
        split,
        vec![
            Segment::Idle { len: lead },
            Segment::Loop { cycles: j },
            Segment::Straight { len: l },
            Segment::Idle { len: pad },
        ],
    )
}

fn pure_loop_segments(split: TeamSplit, t: u64, idle_first: bool) -> AdversaryScript {
    let lead = idle_first as u64;
    let span = t - lead;
    let mut segments = vec![Segment::Idle { len: lead }, Segment::Loop { cycles: span / 2 }];
    if span % 2 != 0 {
        segments.push(Segment::HalfLoop);
    }
    AdversaryScript::new(split, segments)
}

/// Randomized loop-then-straight family: a uniformly random loop count
/// `j < R` with `R = floor((T - l - 1)/2)`, a fair coin deciding whether to
/// idle on the first step, then `l` straight steps and idle padding to
/// length `T`.
pub fn build_lsrand(t: u64, k: u32, straight_len: Option<u64>) -> Result<AdversaryDistribution> {
    let l = straight_len.unwrap_or_else(|| default_straight_len(t));
    if t < l + 3 {
        return Err(Error::TooShort { t, need: l + 3 });
    }
    let loop_max = (t - l - 1) / 2;
    Ok(AdversaryDistribution {
        split: TeamSplit::balanced(k)?,
        kind: DistKind::Lsrand { t, straight_len: l, loop_max },
        support: Vec::new(),
    })
}

/// Mixture of the randomized loop-then-straight family (probability `p`)
/// with pure looping (probability `(1 - p)/2` each for loop-from-step-1 and
/// idle-then-loop). `p = 1` collapses to the plain randomized family and
/// `p = 0` to the two looping scripts alone.
pub fn build_lsrandpp(
    t: u64,
    k: u32,
    straight_len: Option<u64>,
    p: f64,
) -> Result<AdversaryDistribution> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::BadProbability { p });
    }
    if p == 1.0 {
        return build_lsrand(t, k, straight_len);
    }
    let split = TeamSplit::balanced(k)?;
    if p == 0.0 {
        if t == 0 {
            return Err(Error::BadHorizon { detail: "looping mixture needs T >= 1".into() });
        }
        return AdversaryDistribution::from_support(vec![
            (pure_loop_segments(split, t, false), 0.5),
            (pure_loop_segments(split, t, true), 0.5),
        ]);
    }
    let base = build_lsrand(t, k, straight_len)?;
    let (straight_len, loop_max) = match base.kind {
        DistKind::Lsrand { straight_len, loop_max, .. } => (straight_len, loop_max),
        _ => unreachable!("build_lsrand returns the Lsrand kind"),
    };
    Ok(AdversaryDistribution {
        split,
        kind: DistKind::LsrandPp { t, straight_len, loop_max, mix_p: p },
        support: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Geometric-horizon scripts
// ---------------------------------------------------------------------------

/// What a geometric script does after its straight prefix, forever.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometricTail {
    /// Advance the leading side, then the lagging side; the gap alternates
    /// between the prefix length `l` and `l + 1`.
    LoopPair,
    /// Keep advancing the leader; the gap grows without bound.
    StraightRun,
}

/// An eventually-periodic script for the geometric horizon: `straight_prefix`
/// straight steps, then the 2-periodic (or constant) tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometricScript {
    pub split: TeamSplit,
    pub straight_prefix: u64,
    pub tail: GeometricTail,
}

impl GeometricScript {
    pub fn num_experts(&self) -> u32 {
        self.split.num_experts()
    }

    pub fn to_text(&self) -> String {
        match (self.straight_prefix, self.tail) {
            (0, GeometricTail::LoopPair) => "loop".to_string(),
            (_, GeometricTail::StraightRun) => "straight".to_string(),
            (l, GeometricTail::LoopPair) => format!("sl:{l}"),
        }
    }
}

/// Pure looping under the geometric horizon.
pub fn build_geometric_loop(k: u32) -> Result<GeometricScript> {
    Ok(GeometricScript {
        split: TeamSplit::balanced(k)?,
        straight_prefix: 0,
        tail: GeometricTail::LoopPair,
    })
}

/// Pure straight-line play under the geometric horizon.
pub fn build_geometric_straight(k: u32) -> Result<GeometricScript> {
    Ok(GeometricScript {
        split: TeamSplit::balanced(k)?,
        straight_prefix: 0,
        tail: GeometricTail::StraightRun,
    })
}

/// Two-expert straight-then-loop family: `l` straight steps, then loop with
/// the gap alternating `l <-> l + 1`. `None` is the pure-straight endpoint.
pub fn build_geometric_sl(straight_len: Option<u64>) -> GeometricScript {
    let split = TeamSplit { team_a: 1, team_b: 1 };
    match straight_len {
        Some(l) => {
            GeometricScript { split, straight_prefix: l, tail: GeometricTail::LoopPair }
        }
        None => GeometricScript { split, straight_prefix: 0, tail: GeometricTail::StraightRun },
    }
}

// ---------------------------------------------------------------------------
// Unified adversary specification
// ---------------------------------------------------------------------------

/// Any adversary the evaluators accept: a single finite script, a finite
/// distribution over scripts, or a geometric-horizon script.
#[derive(Debug, Clone, PartialEq)]
pub enum AdversarySpec {
    Finite(AdversaryScript),
    Mixture(AdversaryDistribution),
    Geometric(GeometricScript),
}

impl AdversarySpec {
    pub fn num_experts(&self) -> u32 {
        match self {
            AdversarySpec::Finite(s) => s.num_experts(),
            AdversarySpec::Mixture(d) => d.num_experts(),
            AdversarySpec::Geometric(g) => g.num_experts(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AdversarySpec::Finite(s) => s.to_text(),
            AdversarySpec::Mixture(d) => match d.kind() {
                DistKind::Explicit => {
                    let parts: Vec<String> = d
                        .entries()
                        .map(|(script, w)| format!("{w}@{}", script.to_text()))
                        .collect();
                    parts.join(";")
                }
                DistKind::Lsrand { straight_len, .. } => format!("lsrand:{straight_len}"),
                DistKind::LsrandPp { straight_len, mix_p, .. } => {
                    format!("lsrand++:{mix_p}:{straight_len}")
                }
            },
            AdversarySpec::Geometric(g) => g.to_text(),
        }
    }
}

/// Parses an adversary for the given horizon (`Some(T)` finite, `None`
/// geometric) and expert count; inverse of [`AdversarySpec::to_text`].
pub fn parse_adversary(text: &str, finite_steps: Option<u64>, k: u32) -> Result<AdversarySpec> {
    let text = text.trim();
    if text.contains('@') {
        let t = finite_steps.ok_or_else(|| Error::ParseError {
            detail: "weighted mixtures need a finite horizon".into(),
        })?;
        let _ = t;
        let support = text
            .split(';')
            .map(|entry| {
                let (w, body) = entry.split_once('@').ok_or_else(|| Error::ParseError {
                    detail: format!("bad mixture entry {entry:?}, expected weight@script"),
                })?;
                let weight: f64 = w.trim().parse().map_err(|_| Error::ParseError {
                    detail: format!("bad mixture weight {w:?}"),
                })?;
                Ok((AdversaryScript::parse(body, k)?, weight))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(AdversarySpec::Mixture(AdversaryDistribution::from_support(support)?));
    }
    if let Some(spec) = parse_named(text, finite_steps, k)? {
        return Ok(spec);
    }
    match finite_steps {
        Some(_) => Ok(AdversarySpec::Finite(AdversaryScript::parse(text, k)?)),
        None => Err(Error::ParseError {
            detail: format!("geometric horizons take named adversaries only, got {text:?}"),
        }),
    }
}

fn parse_named(text: &str, finite_steps: Option<u64>, k: u32) -> Result<Option<AdversarySpec>> {
    let parse_len = |s: &str| -> Result<u64> {
        s.parse().map_err(|_| Error::ParseError { detail: format!("bad length {s:?}") })
    };
    match finite_steps {
        Some(t) => match text {
            "loop" => Ok(Some(AdversarySpec::Finite(build_finite_loop(t, k)?))),
            "straight" => Ok(Some(AdversarySpec::Finite(straight_primitive(k, t)?))),
            "lsdet" => Ok(Some(AdversarySpec::Finite(build_lsdet(t, k, None)?))),
            "lsrand" => Ok(Some(AdversarySpec::Mixture(build_lsrand(t, k, None)?))),
            _ => {
                if let Some(arg) = text.strip_prefix("lsdet:") {
                    let l = parse_len(arg)?;
                    Ok(Some(AdversarySpec::Finite(build_lsdet(t, k, Some(l))?)))
                } else if let Some(arg) = text.strip_prefix("lsrand++:") {
                    let (p_text, l) = match arg.split_once(':') {
                        Some((p, l)) => (p, Some(parse_len(l)?)),
                        None => (arg, None),
                    };
                    let p: f64 = p_text.parse().map_err(|_| Error::ParseError {
                        detail: format!("bad mix probability {p_text:?}"),
                    })?;
                    Ok(Some(AdversarySpec::Mixture(build_lsrandpp(t, k, l, p)?)))
                } else if let Some(arg) = text.strip_prefix("lsrand:") {
                    let l = parse_len(arg)?;
                    Ok(Some(AdversarySpec::Mixture(build_lsrand(t, k, Some(l))?)))
                } else {
                    Ok(None)
                }
            }
        },
        None => match text {
            "loop" => Ok(Some(AdversarySpec::Geometric(build_geometric_loop(k)?))),
            "straight" => Ok(Some(AdversarySpec::Geometric(build_geometric_straight(k)?))),
            _ => {
                if let Some(arg) = text.strip_prefix("sl:") {
                    if k != 2 {
                        return Err(Error::BadExpertCount { k });
                    }
                    let spec = if arg == "inf" {
                        build_geometric_sl(None)
                    } else {
                        build_geometric_sl(Some(parse_len(arg)?))
                    };
                    Ok(Some(AdversarySpec::Geometric(spec)))
                } else {
                    Ok(None)
                }
            }
        },
    }
}
