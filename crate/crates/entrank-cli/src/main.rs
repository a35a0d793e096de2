//! `entrank` — rank-based entanglement analysis of multipartite pure states.
//!
//! Subcommands:
//!   analyze      rank profile of a state (JSON in, JSON/table out)
//!   certify      classification plus superposition robustness budgets
//!   construct    disentangling superposition plans (lemma2 / thm4 / thm5)
//!   search       adversarial search for entanglement-breaking superpositions
//!   verify-paper run the built-in reference fixtures
//!
//! Exit codes: 0 success, 1 failed assertion or unmet search objective,
//! 2 input error.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use entrank::json::{PlanJson, StateJson};
use entrank::{
    adversarial_search, certify, lemma2_construction, rank_profile_full, theorem4_construction,
    theorem5_construction, verify_plan, Objective, PureState, SearchConfig,
};

#[derive(Parser)]
#[command(name = "entrank", version, about = "Entanglement rank analysis for multipartite pure states")]
struct Cli {
    /// Relative tolerance for numerical rank decisions.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct OutputMode {
    /// Emit machine-readable JSON (default for analysis commands).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table.
    #[arg(long)]
    table: bool,
}

impl OutputMode {
    fn wants_table(&self, default_table: bool) -> bool {
        if self.table {
            true
        } else if self.json {
            false
        } else {
            default_table
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt ranks across every bipartition, with the second-order minimum.
    Analyze {
        /// State JSON file, or `-` for standard input.
        state: String,
        #[command(flatten)]
        output: OutputMode,
    },
    /// Classification and robustness budgets.
    Certify {
        state: String,
        #[command(flatten)]
        output: OutputMode,
    },
    /// Build a disentangling superposition plan.
    Construct {
        state: String,
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        output: OutputMode,
    },
    /// Numerically search for a superposition that breaks the objective.
    /// Exits 1 when no plan is found, so scripts can branch on success.
    Search {
        state: String,
        #[arg(long, value_enum)]
        objective: CliObjective,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
        #[command(flatten)]
        output: OutputMode,
    },
    /// Run every built-in reference fixture and report pass/fail.
    VerifyPaper {
        #[command(flatten)]
        output: OutputMode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// r mutually orthogonal product states, also orthogonal to the state.
    Lemma2,
    /// r - 1 pairwise orthogonal product states (non-flat spectrum only).
    Thm4,
    /// 2r - 1 state-orthogonal product states for tripartite diagonal states.
    Thm5,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliObjective {
    /// Drive some bipartition to rank 1.
    BreakGme,
    /// Drive every bipartition to rank 1.
    FullSep,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_state(path: &str) -> Result<PureState, String> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?
    };
    let parsed: StateJson = serde_json::from_str(&text)
        .map_err(|e| format!("parse error at line {}, column {}: {e}", e.line(), e.column()))?;
    parsed.to_state().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let tol = cli.tol;
    match cli.command {
        Command::Analyze { state, output } => {
            let state = read_state(&state)?;
            let profile = rank_profile_full(&state, tol).map_err(|e| e.to_string())?;
            if output.wants_table(false) {
                for (part, rank) in &profile.ranks {
                    println!("{part:>12}  rank {rank}");
                }
                println!("{:>12}  {}", "r1_min", profile.r1_min);
                println!("{:>12}  {}", "r1_max", profile.r1_max);
                println!("{:>12}  {}", "r2_min", profile.r2_min.expect("computed"));
                if profile.r2_from_first_order {
                    println!("{:>12}  (bipartite: r2_min = r1_min)", "");
                }
            } else {
                let ranks: serde_json::Map<String, serde_json::Value> = profile
                    .ranks
                    .iter()
                    .map(|(p, r)| (p.to_string(), json!(r)))
                    .collect();
                let mut doc = json!({
                    "ranks": ranks,
                    "r1_min": profile.r1_min,
                    "r1_max": profile.r1_max,
                    "r2_min": profile.r2_min.expect("computed"),
                    "tol": tol,
                });
                if profile.r2_from_first_order {
                    doc["r2_degenerate"] = json!(true);
                }
                println!("{doc}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { state, output } => {
            let state = read_state(&state)?;
            let cert = certify(&state, tol).map_err(|e| e.to_string())?;
            let class = entrank::robustness::classify_from_profile(&state, &cert.profile);
            if output.wants_table(false) {
                println!("classification  {}", class.class);
                println!("gme_budget      {}", cert.gme_budget);
                println!("insep_budget    {}", cert.insep_budget);
                println!("triple_budget   {}", cert.triple_budget);
                println!("marginal        {}", cert.profile.marginal);
                if let Some(note) = &cert.note {
                    println!("note            {note}");
                }
                if !class.witness.is_empty() {
                    let cuts: Vec<String> =
                        class.witness.iter().map(|b| b.to_string()).collect();
                    println!("witness         {}", cuts.join(" "));
                }
            } else {
                let mut doc = json!({
                    "classification": class.class,
                    "gme_budget": cert.gme_budget,
                    "insep_budget": cert.insep_budget,
                    "triple_budget": cert.triple_budget,
                    "marginal": cert.profile.marginal,
                    "witness": class.witness,
                });
                if let Some(note) = &cert.note {
                    doc["note"] = json!(note);
                }
                println!("{doc}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Construct {
            state,
            method,
            output,
        } => {
            let state = read_state(&state)?;
            let plan = match method {
                Method::Lemma2 => lemma2_construction(&state, tol),
                Method::Thm4 => theorem4_construction(&state, tol),
                Method::Thm5 => theorem5_construction(&state, tol),
            }
            .map_err(|e| e.to_string())?;
            let verification = verify_plan(&state, &plan, tol).map_err(|e| e.to_string())?;
            let verified = verification.classification.class.to_string();
            if output.wants_table(false) {
                println!("plan with {} product states", plan.len());
                println!("lead          {}", plan.lead);
                for (i, (coeff, _)) in plan.terms.iter().enumerate() {
                    println!("term {i}        coeff {coeff}");
                }
                println!("verified      {verified}");
            } else {
                let doc = PlanJson::from_plan(&plan, Some(verified));
                println!("{}", serde_json::to_string(&doc).expect("serializable"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            state,
            objective,
            k,
            seed,
            restarts,
            max_iters,
            threshold,
            output,
        } => {
            let state = read_state(&state)?;
            let cfg = SearchConfig {
                k,
                objective: match objective {
                    CliObjective::BreakGme => Objective::BreakGme,
                    CliObjective::FullSep => Objective::ReachFullSeparability,
                },
                restarts,
                max_iters,
                seed,
                success_threshold: threshold,
                tol,
            };
            let report = adversarial_search(&state, &cfg).map_err(|e| e.to_string())?;
            if output.wants_table(false) {
                println!("succeeded        {}", report.succeeded);
                println!("best_gap         {:e}", report.best_gap);
                println!("iterations_used  {}", report.iterations_used);
            } else {
                let plan_json = report
                    .best_plan
                    .as_ref()
                    .map(|p| serde_json::to_value(PlanJson::from_plan(p, None)).expect("serializable"));
                let doc = json!({
                    "best_gap": report.best_gap,
                    "succeeded": report.succeeded,
                    "iterations_used": report.iterations_used,
                    "best_plan": plan_json,
                });
                println!("{doc}");
            }
            Ok(if report.succeeded {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::VerifyPaper { output } => {
            let fixtures = entrank::fixtures::all();
            let mut all_passed = true;
            let mut rows = Vec::new();
            for fixture in &fixtures {
                for result in fixture.run(tol) {
                    all_passed &= result.passed;
                    rows.push((fixture.name, result));
                }
            }
            if output.wants_table(true) {
                for (fixture, result) in &rows {
                    println!(
                        "{}  {fixture:<9} {}{}",
                        if result.passed { "PASS" } else { "FAIL" },
                        result.name,
                        if result.passed {
                            String::new()
                        } else {
                            format!("  [{}]", result.detail)
                        }
                    );
                }
                let failed = rows.iter().filter(|(_, r)| !r.passed).count();
                println!(
                    "{} checks across {} fixtures, {} failed",
                    rows.len(),
                    fixtures.len(),
                    failed
                );
            } else {
                let doc: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(fixture, r)| {
                        json!({
                            "fixture": fixture,
                            "check": r.name,
                            "passed": r.passed,
                            "detail": r.detail,
                        })
                    })
                    .collect();
                println!("{}", serde_json::Value::Array(doc));
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
