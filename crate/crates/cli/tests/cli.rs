//! End-to-end tests of the command-line interface: every documented example,
//! the exit-code contract, and the determinism and round-trip guarantees.

use std::process::{Command, Output};

use regret_forge::rows::{format_table, parse_table};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regret-forge"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 stdout")
}

/// Exit code plus standard error of a run expected to fail.
fn run_err(args: &[&str]) -> (i32, String) {
    let out = run(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid JSON output")
}

#[test]
fn eval_reports_the_documented_regret() {
    let out = run_ok(&[
        "eval", "--horizon", "finite", "--T", "12", "--k", "2", "--eta", "0.5", "--adversary",
        "L*4 S*4",
    ]);
    let rows = parse_table(&out).expect("CSV output parses");
    assert_eq!(rows.len(), 1);
    let report = rows[0].report;
    assert!(
        (report.regret - 1.818744938781915).abs() < 1e-12,
        "regret {}",
        report.regret
    );
    assert_eq!(rows[0].family, "single");
    assert_eq!(rows[0].adversary, "L*4 S*4");
    assert!((report.regret - report.loop_part - report.straight_part).abs() < 1e-12);
}

#[test]
fn certain_stop_gives_zero_regret() {
    let out = run_ok(&[
        "eval", "--horizon", "geometric", "--delta", "1", "--eta", "0.3", "--adversary", "loop",
    ]);
    let rows = parse_table(&out).unwrap();
    assert_eq!(rows[0].report.regret, 0.0);
}

#[test]
fn zero_horizon_is_a_validation_failure() {
    let (code, stderr) =
        run_err(&["eval", "--T", "0", "--eta", "0.5", "--adversary", "lsdet"]);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("BadHorizon"), "{stderr}");
}

#[test]
fn missing_inputs_are_validation_failures() {
    let (code, stderr) = run_err(&["eval", "--T", "10", "--eta", "0.5"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("DomainError"), "{stderr}");

    let (code, stderr) = run_err(&["eval", "--eta", "0.5", "--adversary", "lsdet"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("needs --T"), "{stderr}");

    let (code, stderr) =
        run_err(&["eval", "--T", "10", "--eta", "abc", "--adversary", "lsdet"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("ParseError"), "{stderr}");
}

#[test]
fn oracle_rejects_oversized_horizons() {
    let (code, stderr) = run_err(&["oracle", "--T", "6000", "--eta", "0.3"]);
    assert_eq!(code, 3, "{stderr}");
    assert!(stderr.contains("TooLarge"), "{stderr}");

    let (code, stderr) = run_err(&[
        "oracle", "--geometric", "--delta", "0.01", "--eta", "0.22", "--d-max", "200000",
    ]);
    assert_eq!(code, 3, "{stderr}");
    assert!(stderr.contains("TooLarge"), "{stderr}");
}

#[test]
fn finite_oracle_finds_the_loop_then_straight_shape() {
    let out = run_ok(&["oracle", "--T", "50", "--eta", "0.3"]);
    let doc = json(&out);
    assert_eq!(doc["schema"], "regret-forge/1");
    assert_eq!(doc["structure"], "LoopThenStraight");
    let gaps = doc["play"]["gaps_head"].as_array().unwrap();
    assert_eq!(gaps[0], 0);
    assert_eq!(gaps[1], 1);
    assert_eq!(gaps[2], 0, "the optimal play oscillates before it climbs");
    assert!(doc["regret"].as_f64().unwrap() > 0.0);
}

#[test]
fn geometric_oracle_finds_the_straight_then_loop_shape() {
    let out = run_ok(&["oracle", "--geometric", "--delta", "0.01", "--eta", "auto"]);
    let doc = json(&out);
    assert_eq!(doc["structure"], "StraightThenLoop");
    assert!(doc["threshold"].as_u64().unwrap() > 0);
    let actions = doc["play"]["actions_head"].as_str().unwrap();
    assert!(actions.starts_with('U'), "play climbs from a tie: {actions}");
    assert!(actions.contains('D'), "play eventually turns back: {actions}");
}

#[test]
fn geometric_oracle_agrees_with_the_swept_family() {
    let sweep = run_ok(&[
        "sweep", "--axis", "l", "--from", "0", "--to", "50", "--count", "51", "--geometric",
        "--delta", "0.01", "--eta", "0.22", "--adversary", "sl",
    ]);
    let rows = parse_table(&sweep).unwrap();
    assert_eq!(rows.len(), 51);
    let (best, row) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.report.regret.total_cmp(&b.1.report.regret))
        .unwrap();
    assert!(best > 0 && best < 50, "the best straight length is interior, got {best}");

    let oracle = run_ok(&["oracle", "--geometric", "--delta", "0.01", "--eta", "0.22"]);
    let doc = json(&oracle);
    let vi_regret = doc["regret"].as_f64().unwrap();
    assert!(
        (vi_regret - row.report.regret).abs() < 1e-6,
        "value iteration {vi_regret} vs best swept row {}",
        row.report.regret
    );
    let threshold = doc["threshold"].as_u64().unwrap();
    assert_eq!(
        threshold,
        best as u64 + 1,
        "climbing to the threshold then alternating equals straight play of one less step"
    );
}

#[test]
fn alpha_sweep_minimizes_near_the_closed_form_optimum() {
    let out = run_ok(&[
        "sweep", "--axis", "alpha", "--from", "1", "--to", "6", "--count", "26", "--T",
        "1000000", "--k", "2", "--adversary", "lsdet",
    ]);
    let rows = parse_table(&out).unwrap();
    assert_eq!(rows.len(), 26);
    let best = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.report.regret.total_cmp(&b.1.report.regret))
        .unwrap()
        .0;
    let alpha = 1.0 + 5.0 * best as f64 / 25.0;
    let target = (8.0 * 2.0_f64.ln()).sqrt();
    assert!(
        (alpha - target).abs() <= 0.11,
        "grid minimum at alpha {alpha}, closed form {target}"
    );
}

#[test]
fn sweep_csv_round_trips_without_loss() {
    let out = run_ok(&[
        "sweep", "--axis", "delta", "--from", "0.1", "--to", "0.9", "--count", "9",
        "--geometric", "--eta", "0.3", "--adversary", "loop",
    ]);
    let rows = parse_table(&out).expect("sweep CSV parses");
    assert_eq!(format_table(&rows).unwrap(), out, "reformatting changes no byte");
    for row in &rows {
        row.schedule().expect("schedule column reconstructs");
        row.adversary_spec().expect("adversary column reconstructs");
    }
}

#[test]
fn empty_grid_is_a_validation_failure() {
    let (code, stderr) = run_err(&[
        "sweep", "--axis", "alpha", "--from", "1", "--to", "2", "--count", "0", "--T", "100",
        "--eta", "0.1", "--adversary", "lsdet",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("empty grid"), "{stderr}");
}

#[test]
fn manifest_runs_match_flag_runs() {
    let manifest = serde_json::json!({
        "schema": "regret-forge/1",
        "command": "eval",
        "config": { "horizon": { "kind": "finite", "steps": 12 }, "num_experts": 2 },
        "schedule": { "family": "single", "constant_rate": 0.5 },
        "adversary_spec": "L*4 S*4",
        "seed": 0,
        "output_path": null,
        "format": "csv"
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).unwrap();
    let path = path.to_str().unwrap();

    let from_manifest = run_ok(&["eval", "--manifest", path]);
    let from_flags = run_ok(&[
        "eval", "--horizon", "finite", "--T", "12", "--k", "2", "--eta", "0.5", "--adversary",
        "L*4 S*4",
    ]);
    assert_eq!(from_manifest, from_flags);

    let (code, stderr) = run_err(&["sweep", "--manifest", path, "--axis", "alpha", "--from",
        "1", "--to", "2", "--count", "2"]);
    assert_eq!(code, 2, "a manifest for another subcommand is rejected");
    assert!(stderr.contains("DomainError"), "{stderr}");
}

#[test]
fn identical_runs_are_byte_identical_and_seeds_matter() {
    let args = [
        "eval", "--geometric", "--delta", "0.02", "--eta", "0.3", "--adversary", "sl:5",
        "--trials", "5000", "--seed", "7", "--format", "json",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(first, second);

    let mut reseeded = args;
    reseeded[11] = "8";
    let third = run_ok(&reseeded);
    let mean = |text: &str| json(text)["monte_carlo"]["mean"].as_f64().unwrap();
    assert_ne!(mean(&first), mean(&third), "a new seed draws new trials");

    let exact = json(&first)["rows"][0]["report"]["regret"].as_f64().unwrap();
    let stderr = json(&first)["monte_carlo"]["stderr"].as_f64().unwrap();
    assert!(
        (mean(&first) - exact).abs() < 4.0 * stderr + 1e-9,
        "sampled mean {} vs exact {exact} (stderr {stderr})",
        mean(&first)
    );
}

#[test]
fn monte_carlo_output_requires_json() {
    let (code, stderr) = run_err(&[
        "eval", "--geometric", "--delta", "0.5", "--eta", "0.3", "--adversary", "loop",
        "--trials", "10",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("json"), "{stderr}");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("row.csv");
    let args = ["eval", "--T", "40", "--eta", "0.25", "--adversary", "lsdet:10"];
    let on_stdout = run_ok(&args);
    let mut with_out = args.to_vec();
    let path_text = path.to_str().unwrap();
    with_out.extend(["--out", path_text]);
    let quiet = run_ok(&with_out);
    assert!(quiet.is_empty(), "writing a file prints nothing");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), on_stdout);
}

#[test]
fn saddle_solution_matches_the_known_constants() {
    let doc = json(&run_ok(&["optimize", "--target", "saddle"]));
    assert!((doc["alpha_star"].as_f64().unwrap() - 2.2).abs() < 5e-3);
    assert!((doc["gamma_star"].as_f64().unwrap() - 0.769).abs() < 5e-3);
    assert!((doc["h_star"].as_f64().unwrap() - 0.391).abs() < 1e-3);
}

#[test]
fn mix_solution_matches_the_known_constants() {
    let doc = json(&run_ok(&["optimize", "--target", "mix"]));
    assert!((doc["p_star"].as_f64().unwrap() - 0.866).abs() < 2e-3);
    let factor = doc["factor_star"].as_f64().unwrap();
    assert!(factor > 0.68 && factor < 0.69, "factor {factor}");
}

#[test]
fn rate_optimization_lands_near_the_closed_form_alpha() {
    let doc = json(&run_ok(&[
        "optimize", "--target", "rate", "--T", "100000", "--k", "2", "--adversary", "lsdet",
    ]));
    let alpha = doc["alpha"].as_f64().unwrap();
    let target = (8.0 * 2.0_f64.ln()).sqrt();
    assert!((alpha - target).abs() / target < 0.05, "alpha {alpha} vs {target}");
    assert_eq!(doc["degenerate"], false);
}

#[test]
fn extrapolation_recovers_the_two_expert_constant() {
    let doc = json(&run_ok(&["asymptote", "--k", "2", "--adversary", "lsdet"]));
    let constant = doc["constant"].as_f64().unwrap();
    let target = (0.5 * 2.0_f64.ln()).sqrt();
    assert!(
        (constant - target).abs() / target < 0.01,
        "extrapolated {constant} vs limit {target}"
    );
    assert_eq!(doc["samples"].as_array().unwrap().len(), 3);
}
