//! Flat CSV rows for evaluation results.
//!
//! One row captures everything needed to reproduce an evaluation — horizon,
//! expert count, schedule (family name plus compact spec), adversary text —
//! together with the full regret decomposition. Numbers are written in their
//! shortest exact decimal form, so a written table parses back into
//! bit-identical rows.

use crate::adversaries::{parse_adversary, AdversarySpec};
use crate::domain::{EtaSchedule, GameConfig, Horizon, RegretReport};
use crate::error::{Error, Result};

/// Column names, in order, for every CSV table the crate emits. The first
/// column holds `T` (finite horizon, plain integer) or `delta` (geometric
/// horizon, always carrying a decimal point or exponent).
pub const CSV_HEADER: &str =
    "T|delta,k,family,eta_spec,adversary,regret,loop_part,straight_part,normalized,truncation_bound";

const NUM_COLUMNS: usize = 10;

/// One evaluated configuration, flattened for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub horizon: Horizon<f64>,
    pub num_experts: u32,
    pub family: String,
    pub eta_spec: String,
    pub adversary: String,
    pub report: RegretReport<f64>,
}

impl ReportRow {
    pub fn new(
        cfg: &GameConfig<f64>,
        sched: &EtaSchedule<f64>,
        adversary: impl Into<String>,
        report: RegretReport<f64>,
    ) -> ReportRow {
        ReportRow {
            horizon: cfg.horizon,
            num_experts: cfg.num_experts,
            family: sched.family_name().to_string(),
            eta_spec: sched.to_spec(),
            adversary: adversary.into(),
            report,
        }
    }

    pub fn config(&self) -> GameConfig<f64> {
        GameConfig::new(self.horizon, self.num_experts)
    }

    /// Reconstructs the schedule from the `family` and `eta_spec` columns.
    pub fn schedule(&self) -> Result<EtaSchedule<f64>> {
        EtaSchedule::from_spec(&self.family, &self.eta_spec)
    }

    /// Reconstructs the adversary from the `adversary` column.
    pub fn adversary_spec(&self) -> Result<AdversarySpec> {
        let steps = match self.horizon {
            Horizon::Finite { steps } => Some(steps),
            Horizon::Geometric { .. } => None,
        };
        parse_adversary(&self.adversary, steps, self.num_experts)
    }

    /// Renders one CSV line (no trailing newline).
    pub fn to_csv(&self) -> Result<String> {
        for (name, text) in
            [("family", &self.family), ("eta_spec", &self.eta_spec), ("adversary", &self.adversary)]
        {
            if text.contains(',') || text.contains('\n') {
                return Err(Error::DomainError {
                    detail: format!("{name} column {text:?} would break the CSV layout"),
                });
            }
        }
        let horizon = match self.horizon {
            Horizon::Finite { steps } => steps.to_string(),
            // Geometric deltas always render with a '.' or exponent, so the
            // first column never collides with a finite step count.
            Horizon::Geometric { stop_prob } => fmt_exact(stop_prob),
        };
        let r = &self.report;
        Ok(format!(
            "{horizon},{k},{family},{eta},{adv},{},{},{},{},{}",
            fmt_exact(r.regret),
            fmt_exact(r.loop_part),
            fmt_exact(r.straight_part),
            fmt_exact(r.normalized),
            fmt_exact(r.truncation_bound),
            k = self.num_experts,
            family = self.family,
            eta = self.eta_spec,
            adv = self.adversary,
        ))
    }

    /// Parses one CSV line; the inverse of [`ReportRow::to_csv`].
    pub fn from_csv(line: &str) -> Result<ReportRow> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != NUM_COLUMNS {
            return Err(Error::ParseError {
                detail: format!("expected {NUM_COLUMNS} columns, got {}: {line:?}", fields.len()),
            });
        }
        let horizon = parse_horizon(fields[0])?;
        let num_experts: u32 = fields[1]
            .parse()
            .map_err(|_| Error::ParseError { detail: format!("bad expert count {:?}", fields[1]) })?;
        let row = ReportRow {
            horizon,
            num_experts,
            family: fields[2].to_string(),
            eta_spec: fields[3].to_string(),
            adversary: fields[4].to_string(),
            report: RegretReport {
                regret: parse_exact(fields[5])?,
                loop_part: parse_exact(fields[6])?,
                straight_part: parse_exact(fields[7])?,
                normalized: parse_exact(fields[8])?,
                truncation_bound: parse_exact(fields[9])?,
            },
        };
        row.config().validate()?;
        row.schedule()?;
        Ok(row)
    }
}

/// Renders a header line plus one line per row, newline-terminated.
pub fn format_table(rows: &[ReportRow]) -> Result<String> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv()?);
        out.push('\n');
    }
    Ok(out)
}

/// Parses a table produced by [`format_table`], checking the header.
pub fn parse_table(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::ParseError { detail: "empty CSV input".into() })?
        .trim_end_matches('\r');
    if header != CSV_HEADER {
        return Err(Error::SchemaMismatch { found: header.to_string() });
    }
    lines.filter(|l| !l.trim().is_empty()).map(ReportRow::from_csv).collect()
}

/// Shortest decimal form that parses back to the identical `f64`; integral
/// values keep a trailing `.0` so they stay distinguishable from integers.
fn fmt_exact(x: f64) -> String {
    format!("{x:?}")
}

fn parse_exact(text: &str) -> Result<f64> {
    text.parse()
        .map_err(|_| Error::ParseError { detail: format!("bad numeric field {text:?}") })
}

fn parse_horizon(text: &str) -> Result<Horizon<f64>> {
    if text.bytes().all(|b| b.is_ascii_digit()) {
        let steps = text
            .parse()
            .map_err(|_| Error::ParseError { detail: format!("bad step count {text:?}") })?;
        Ok(Horizon::Finite { steps })
    } else {
        Ok(Horizon::Geometric { stop_prob: parse_exact(text)? })
    }
}

// ---------------------------------------------------------------------------
