//! Batch command-line front end: evaluate adversaries against learning-rate
//! schedules, sweep one-axis grids, run the optimizers and best-response
//! oracles, and emit CSV or JSON for external plotting.
//!
//! Outputs are deterministic: identical inputs (or an identical `--manifest`
//! file) produce byte-identical files, and every CSV emitted parses back
//! through the library's own reader without information loss.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use regret_forge::adversaries::parse_adversary;
use regret_forge::domain::{from_json, to_json, EtaSchedule, GameConfig, Horizon, RegretReport};
use regret_forge::optimize::{
    alpha_to_eta, asymptotic_extrapolate, optimal_alpha_finite, optimize_eta, optimize_mix_p,
    solve_geometric_system, EtaOptimum, GeometricSolution,
};
use regret_forge::regret::{
    best_response_dp_finite, best_response_vi_geometric, evaluate, monte_carlo_regret, MwaPolicy,
    OptimalPlay, PathStructure, ViOptions,
};
use regret_forge::rows::format_table;
use regret_forge::{Error, ReportRow, Result};

#[derive(Parser)]
#[command(name = "regret-forge", version, about = "Exact expected regret of multiplicative-weights forecasters against structured adversaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one adversary against one schedule and emit a report row.
    Eval(EvalArgs),
    /// Emit one report row per point of a one-axis grid.
    Sweep(SweepArgs),
    /// Minimize over the learning rate, or solve the closed-form optima.
    Optimize(OptimizeArgs),
    /// Compute the exact best-response adversary against a schedule.
    Oracle(OracleArgs),
    /// Extrapolate normalized regret across horizons to its limit.
    Asymptote(AsymptoteArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    game: GameArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Grid axis: the swept quantity.
    #[arg(long, value_enum)]
    axis: AxisKind,
    /// First grid value.
    #[arg(long)]
    from: f64,
    /// Last grid value.
    #[arg(long)]
    to: f64,
    /// Number of grid points (0 is an error).
    #[arg(long)]
    count: u64,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    game: GameArgs,
    /// What to optimize: the learning rate against the given adversaries,
    /// the looping-mixture weight, or the geometric saddle point.
    #[arg(long, value_enum, default_value_t = OptimizeTarget::Rate)]
    target: OptimizeTarget,
    /// Lower end of the rate-parameter bracket.
    #[arg(long, default_value_t = 0.1)]
    bracket_lo: f64,
    /// Upper end of the rate-parameter bracket.
    #[arg(long, default_value_t = 20.0)]
    bracket_hi: f64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Gap-range truncation for the geometric value iteration.
    #[arg(long, default_value_t = 4096)]
    d_max: u64,
    /// Convergence tolerance for the geometric value iteration.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Sweep limit for the geometric value iteration.
    #[arg(long, default_value_t = 1_000_000)]
    max_sweeps: u64,
}

#[derive(Args)]
struct AsymptoteArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Horizons to evaluate before extrapolating (needs at least three).
    #[arg(long = "t-grid", value_delimiter = ',', default_values_t = vec![10_000u64, 100_000, 1_000_000])]
    t_grid: Vec<u64>,
    /// Rate parameter; the learning rate at horizon T is ln(1 + alpha/sqrt T).
    /// Defaults to the closed-form optimum for k experts.
    #[arg(long)]
    alpha: Option<f64>,
}

/// Flags shared by every subcommand; a `--manifest` file replaces them all.
#[derive(Args, Clone)]
struct GameArgs {
    /// Horizon kind.
    #[arg(long, value_enum, default_value_t = HorizonKind::Finite)]
    horizon: HorizonKind,
    /// Shorthand for `--horizon geometric`.
    #[arg(long)]
    geometric: bool,
    /// Finite horizon length.
    #[arg(long = "T")]
    t: Option<u64>,
    /// Geometric stop probability in (0, 1].
    #[arg(long)]
    delta: Option<f64>,
    /// Number of experts.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Constant learning rate, or `auto` for the closed-form optimum.
    #[arg(long, conflicts_with = "eta_schedule")]
    eta: Option<String>,
    /// JSON schedule file (library schema).
    #[arg(long)]
    eta_schedule: Option<PathBuf>,
    /// Adversary text, e.g. "L*4 S*4", "lsdet:100", "lsrand", "loop", "sl:3".
    #[arg(long)]
    adversary: Option<String>,
    /// Seed for any sampled randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo cross-check trials (JSON output only; 0 disables).
    #[arg(long, default_value_t = 0)]
    trials: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for report rows.
    #[arg(long, value_enum, default_value_t = FormatKind::Csv)]
    format: FormatKind,
    /// JSON manifest carrying every input; other flags are then ignored.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum HorizonKind {
    Finite,
    Geometric,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FormatKind {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum AxisKind {
    /// Rate parameter alpha; the schedule becomes the constant implied rate.
    Alpha,
    /// Straight length appended to a named adversary, e.g. `lsdet` or `sl`.
    L,
    /// Finite horizon length.
    T,
    /// Geometric stop probability.
    Delta,
    /// Mixture weight appended to a named adversary, e.g. `lsrand++`.
    P,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OptimizeTarget {
    Rate,
    Mix,
    Saddle,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum CommandKind {
    Eval,
    Sweep,
    Optimize,
    Oracle,
    Asymptote,
}

/// Everything a run needs, whether it came from flags or a manifest file.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunManifest {
    command: CommandKind,
    config: GameConfig<f64>,
    schedule: EtaSchedule<f64>,
    adversary_spec: String,
    seed: u64,
    #[serde(default)]
    output_path: Option<PathBuf>,
    format: FormatKind,
    #[serde(default)]
    trials: u64,
}

// ---------------------------------------------------------------------------
// Input resolution
// ---------------------------------------------------------------------------

struct Resolved {
    cfg: GameConfig<f64>,
    sched: Option<EtaSchedule<f64>>,
    adversary: Option<String>,
    seed: u64,
    trials: u64,
    out: Option<PathBuf>,
    format: FormatKind,
}

fn read_file(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::ParseError { detail: format!("cannot read {}: {e}", path.display()) })
}

fn resolve(game: &GameArgs, expect: CommandKind) -> Result<Resolved> {
    if let Some(path) = &game.manifest {
        let manifest: RunManifest = from_json(&read_file(path)?)?;
        if manifest.command != expect {
            return Err(Error::DomainError {
                detail: format!(
                    "manifest command {:?} does not match the invoked subcommand {expect:?}",
                    manifest.command
                ),
            });
        }
        return Ok(Resolved {
            cfg: manifest.config,
            sched: Some(manifest.schedule),
            adversary: Some(manifest.adversary_spec),
            seed: manifest.seed,
            trials: manifest.trials,
            out: manifest.output_path,
            format: manifest.format,
        });
    }
    let kind = if game.geometric { HorizonKind::Geometric } else { game.horizon };
    let horizon = match kind {
        HorizonKind::Finite => Horizon::Finite {
            steps: game.t.ok_or_else(|| Error::DomainError {
                detail: "a finite horizon needs --T".into(),
            })?,
        },
        HorizonKind::Geometric => Horizon::Geometric {
            stop_prob: game.delta.ok_or_else(|| Error::DomainError {
                detail: "a geometric horizon needs --delta".into(),
            })?,
        },
    };
    let cfg = GameConfig::new(horizon, game.k);
    let sched = match (&game.eta, &game.eta_schedule) {
        (Some(text), None) => Some(resolve_rate(text, &cfg)?),
        (None, Some(path)) => Some(from_json(&read_file(path)?)?),
        (None, None) => None,
        (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
    };
    Ok(Resolved {
        cfg,
        sched,
        adversary: game.adversary.clone(),
        seed: game.seed,
        trials: game.trials,
        out: game.out.clone(),
        format: game.format,
    })
}

/// `--eta` accepts a number or `auto`, which picks the closed-form optimal
/// rate parameter for the horizon and expert count.
fn resolve_rate(text: &str, cfg: &GameConfig<f64>) -> Result<EtaSchedule<f64>> {
    let rate = if text == "auto" {
        let alpha = match cfg.horizon {
            Horizon::Finite { .. } => optimal_alpha_finite(cfg.num_experts)?,
            Horizon::Geometric { .. } => solve_geometric_system::<f64>()?.alpha_star,
        };
        alpha_to_eta(alpha, &cfg.horizon)?
    } else {
        text.parse().map_err(|_| Error::ParseError {
            detail: format!("bad learning rate {text:?} (number or \"auto\")"),
        })?
    };
    Ok(EtaSchedule::single(rate))
}

fn require_schedule(r: &Resolved) -> Result<EtaSchedule<f64>> {
    r.sched.clone().ok_or_else(|| Error::DomainError {
        detail: "a schedule is required (--eta or --eta-schedule)".into(),
    })
}

fn require_adversary(r: &Resolved) -> Result<String> {
    r.adversary.clone().ok_or_else(|| Error::DomainError {
        detail: "an adversary is required (--adversary)".into(),
    })
}

fn finite_steps_opt(cfg: &GameConfig<f64>) -> Option<u64> {
    match cfg.horizon {
        Horizon::Finite { steps } => Some(steps),
        Horizon::Geometric { .. } => None,
    }
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RowJson {
    horizon: Horizon<f64>,
    num_experts: u32,
    family: String,
    eta_spec: String,
    adversary: String,
    report: RegretReport<f64>,
}

impl From<&ReportRow> for RowJson {
    fn from(row: &ReportRow) -> Self {
        RowJson {
            horizon: row.horizon,
            num_experts: row.num_experts,
            family: row.family.clone(),
            eta_spec: row.eta_spec.clone(),
            adversary: row.adversary.clone(),
            report: row.report,
        }
    }
}

#[derive(Serialize)]
struct RowsBody {
    rows: Vec<RowJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<McBody>,
}

#[derive(Serialize)]
struct McBody {
    mean: f64,
    stderr: f64,
    trials: u64,
}

fn write_output(out: &Option<PathBuf>, mut text: String) -> Result<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::DomainError {
            detail: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_rows(r: &Resolved, rows: Vec<ReportRow>, mc: Option<McBody>) -> Result<()> {
    let text = match r.format {
        FormatKind::Csv => format_table(&rows)?,
        FormatKind::Json => {
            to_json(&RowsBody { rows: rows.iter().map(RowJson::from).collect(), monte_carlo: mc })
        }
    };
    write_output(&r.out, text)
}

fn ensure_finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NoRoot { detail: format!("{what} is not finite ({value})") })
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let r = resolve(&args.game, CommandKind::Eval)?;
    let sched = require_schedule(&r)?;
    let text = require_adversary(&r)?;
    let adv = parse_adversary(&text, finite_steps_opt(&r.cfg), r.cfg.num_experts)?;
    let report = evaluate(&adv, &sched, &r.cfg, None)?;
    ensure_finite(report.regret, "regret")?;
    let mc = if r.trials > 0 {
        if r.format != FormatKind::Json {
            return Err(Error::DomainError {
                detail: "Monte Carlo output needs --format json".into(),
            });
        }
        let est = monte_carlo_regret(&adv, &sched, &r.cfg, r.trials, r.seed)?;
        Some(McBody { mean: est.mean, stderr: est.stderr, trials: est.trials })
    } else {
        None
    };
    let row = ReportRow::new(&r.cfg, &sched, adv.to_text(), report);
    write_rows(&r, vec![row], mc)
}

fn grid_values(from: f64, to: f64, count: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::DomainError { detail: "empty grid (--count 0)".into() });
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::DomainError { detail: format!("bad grid ends {from}..{to}") });
    }
    if count == 1 {
        return Ok(vec![from]);
    }
    Ok((0..count).map(|i| from + (to - from) * i as f64 / (count - 1) as f64).collect())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    // The swept axis supplies the horizon itself, so the matching flag may
    // be omitted; a placeholder keeps resolution uniform.
    let mut game = args.game.clone();
    if game.manifest.is_none() {
        match args.axis {
            AxisKind::T => game.t = game.t.or(Some(1)),
            AxisKind::Delta => game.delta = game.delta.or(Some(1.0)),
            _ => {}
        }
    }
    let r = resolve(&game, CommandKind::Sweep)?;
    let values = grid_values(args.from, args.to, args.count)?;
    let base_text = require_adversary(&r)?;
    let mut rows = Vec::with_capacity(values.len());
    for v in values {
        let (cfg, sched, text) = match args.axis {
            AxisKind::Alpha => {
                let eta = alpha_to_eta(v, &r.cfg.horizon)?;
                (r.cfg, EtaSchedule::single(eta), base_text.clone())
            }
            AxisKind::L => {
                (r.cfg, require_schedule(&r)?, format!("{base_text}:{}", v.round() as u64))
            }
            AxisKind::T => {
                let steps = v.round() as u64;
                let cfg = GameConfig::new(Horizon::Finite { steps }, r.cfg.num_experts);
                if finite_steps_opt(&r.cfg).is_none() {
                    return Err(Error::DomainError {
                        detail: "a horizon sweep needs --horizon finite".into(),
                    });
                }
                (cfg, require_schedule(&r)?, base_text.clone())
            }
            AxisKind::Delta => {
                if finite_steps_opt(&r.cfg).is_some() {
                    return Err(Error::DomainError {
                        detail: "a stop-probability sweep needs --horizon geometric".into(),
                    });
                }
                let cfg = GameConfig::new(Horizon::Geometric { stop_prob: v }, r.cfg.num_experts);
                (cfg, require_schedule(&r)?, base_text.clone())
            }
            AxisKind::P => (r.cfg, require_schedule(&r)?, format!("{base_text}:{v}")),
        };
        let adv = parse_adversary(&text, finite_steps_opt(&cfg), cfg.num_experts)?;
        let report = evaluate(&adv, &sched, &cfg, None)?;
        ensure_finite(report.regret, "regret")?;
        rows.push(ReportRow::new(&cfg, &sched, adv.to_text(), report));
    }
    write_rows(&r, rows, None)
}

#[derive(Serialize)]
struct MixBody {
    p_star: f64,
    factor_star: f64,
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<()> {
    // Only the rate target evaluates a game; the closed-form targets are
    // parameter-free and need no horizon or adversary.
    match args.target {
        OptimizeTarget::Rate => {
            let r = resolve(&args.game, CommandKind::Optimize)?;
            let spec = require_adversary(&r)?;
            let adv = parse_adversary(&spec, finite_steps_opt(&r.cfg), r.cfg.num_experts)?;
            let opt: EtaOptimum<f64> =
                optimize_eta(&[adv], &r.cfg, (args.bracket_lo, args.bracket_hi))?;
            ensure_finite(opt.regret, "optimized regret")?;
            write_output(&r.out, to_json(&opt))
        }
        OptimizeTarget::Mix => {
            let (p_star, factor_star) = optimize_mix_p::<f64>()?;
            write_output(&args.game.out, to_json(&MixBody { p_star, factor_star }))
        }
        OptimizeTarget::Saddle => {
            let sol: GeometricSolution<f64> = solve_geometric_system()?;
            write_output(&args.game.out, to_json(&sol))
        }
    }
}

#[derive(Serialize)]
struct OracleBody {
    regret: f64,
    structure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    straight_len: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<u64>,
    play: PlayDigest,
}

/// Compact view of the optimal play: the first stretch of the gap path or
/// the per-gap action map.
#[derive(Serialize)]
struct PlayDigest {
    kind: String,
    len: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_gap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gaps_head: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_down: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    actions_head: Option<String>,
}

fn play_digest(play: &OptimalPlay) -> PlayDigest {
    match play {
        OptimalPlay::FinitePath { gaps } => PlayDigest {
            kind: "finite_path".into(),
            len: gaps.len(),
            max_gap: gaps.iter().copied().max(),
            gaps_head: Some(gaps.iter().copied().take(64).collect()),
            first_down: None,
            actions_head: None,
        },
        OptimalPlay::StationaryActions { actions } => {
            let letters: String = actions
                .iter()
                .take(256)
                .map(|a| match a {
                    regret_forge::regret::GapAction::Up => 'U',
                    regret_forge::regret::GapAction::Down => 'D',
                })
                .collect();
            let first_down =
                actions.iter().position(|a| matches!(a, regret_forge::regret::GapAction::Down));
            PlayDigest {
                kind: "stationary_actions".into(),
                len: actions.len(),
                max_gap: None,
                gaps_head: None,
                first_down: first_down.map(|i| i as u64),
                actions_head: Some(letters),
            }
        }
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let r = resolve(&args.game, CommandKind::Oracle)?;
    if r.cfg.num_experts != 2 {
        return Err(Error::DomainError {
            detail: format!(
                "the best-response oracles model two experts, not {}",
                r.cfg.num_experts
            ),
        });
    }
    let sched = require_schedule(&r)?;
    let policy = MwaPolicy::new(&sched)?;
    let result = match r.cfg.horizon {
        Horizon::Finite { steps } => best_response_dp_finite(&policy, steps)?,
        Horizon::Geometric { stop_prob } => {
            const D_MAX_LIMIT: u64 = 100_000;
            if args.d_max > D_MAX_LIMIT {
                return Err(Error::TooLarge { limit: D_MAX_LIMIT, requested: args.d_max });
            }
            let opts =
                ViOptions { d_max: args.d_max, tol: args.tol, max_sweeps: args.max_sweeps };
            best_response_vi_geometric(&policy, stop_prob, &opts)?
        }
    };
    ensure_finite(result.regret, "best-response regret")?;
    let (structure, straight_len, threshold) = match result.structure {
        PathStructure::LoopThenStraight { straight_len } => {
            ("LoopThenStraight".to_string(), Some(straight_len), None)
        }
        PathStructure::StraightThenLoop { threshold } => {
            ("StraightThenLoop".to_string(), None, Some(threshold))
        }
        PathStructure::Other => ("Other".to_string(), None, None),
    };
    let body = OracleBody {
        regret: result.regret,
        structure,
        straight_len,
        threshold,
        play: play_digest(&result.play),
    };
    write_output(&r.out, to_json(&body))
}

#[derive(Serialize)]
struct AsymptoteBody {
    /// Present when the per-horizon rates came from a rate parameter rather
    /// than an explicit schedule.
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    constant: f64,
    residual: f64,
    samples: Vec<AsymptoteSample>,
}

#[derive(Serialize)]
struct AsymptoteSample {
    horizon: u64,
    normalized: f64,
}

fn cmd_asymptote(args: &AsymptoteArgs) -> Result<()> {
    let manifest_mode = args.game.manifest.is_some();
    let r = if manifest_mode {
        resolve(&args.game, CommandKind::Asymptote)?
    } else {
        // The horizon comes from the grid, so --T is not required here.
        let mut game = args.game.clone();
        game.t = game.t.or(Some(1));
        resolve(&game, CommandKind::Asymptote)?
    };
    if finite_steps_opt(&r.cfg).is_none() {
        return Err(Error::DomainError {
            detail: "asymptotic extrapolation runs on finite horizons".into(),
        });
    }
    if r.sched.is_some() && args.alpha.is_some() {
        return Err(Error::DomainError {
            detail: "give either --alpha or a schedule, not both".into(),
        });
    }
    let k = r.cfg.num_experts;
    let alpha = if r.sched.is_some() {
        None
    } else {
        Some(match args.alpha {
            Some(a) => a,
            None => optimal_alpha_finite(k)?,
        })
    };
    let text = require_adversary(&r)?;
    let mut samples = Vec::with_capacity(args.t_grid.len());
    let mut out_samples = Vec::with_capacity(args.t_grid.len());
    for &steps in &args.t_grid {
        let cfg: GameConfig<f64> = GameConfig::new(Horizon::Finite { steps }, k);
        let sched = match (&r.sched, alpha) {
            (Some(s), _) => s.clone(),
            (None, Some(a)) => EtaSchedule::single(alpha_to_eta(a, &cfg.horizon)?),
            (None, None) => unreachable!("alpha is set whenever no schedule is given"),
        };
        let adv = parse_adversary(&text, Some(steps), k)?;
        let report = evaluate(&adv, &sched, &cfg, None)?;
        samples.push((steps as f64, report.normalized));
        out_samples.push(AsymptoteSample { horizon: steps, normalized: report.normalized });
    }
    let (constant, residual) = asymptotic_extrapolate(&samples)?;
    ensure_finite(constant, "extrapolated constant")?;
    let body = AsymptoteBody { alpha, constant, residual, samples: out_samples };
    write_output(&r.out, to_json(&body))
}

// ---------------------------------------------------------------------------

/// 0 success, 2 validation, 3 resource limit, 4 numeric failure.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::TooLarge { .. } | Error::DomainTooSmall { .. } => 3,
        Error::NoConvergence { .. } | Error::NoRoot { .. } => 4,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Asymptote(args) => cmd_asymptote(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
