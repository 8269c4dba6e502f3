//! Command-line interface: decide, trace, check, and simulate.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on validation, licensing,
//! or I/O errors — and on check counterexamples, which are also emitted as a
//! loadable scenario document on stdout — and 3 when a resource cap is hit.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::decision::{DecisionError, DecisionFramework};
use crate::engine::EngineError;
use crate::lang::{LangError, Literal};
use crate::oracle::{
    c_star, full_choice_structure, lex_preference, random_scenario, satisfies_warp,
    GeneratedScenario, OracleError,
};
use crate::scenario::{load_scenario, parse_events, Scenario, ScenarioError, World};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("could not encode JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Whether an error is a resource-cap overflow (exit code 3) rather than a
/// validation failure (exit code 2), at any nesting depth.
fn is_cap_error(err: &CliError) -> bool {
    fn engine_cap(e: &EngineError) -> bool {
        matches!(
            e,
            EngineError::StructureCap { .. } | EngineError::LineCap { .. }
        )
    }
    fn decision_cap(e: &DecisionError) -> bool {
        matches!(e, DecisionError::Engine(inner) if engine_cap(inner))
    }
    match err {
        CliError::Engine(e) => engine_cap(e),
        CliError::Decision(e) => decision_cap(e),
        CliError::Scenario(ScenarioError::Decision(e)) => decision_cap(e),
        CliError::Oracle(OracleError::CapExceeded { .. }) => true,
        CliError::Oracle(OracleError::Decision(e)) => decision_cap(e),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "dialectic",
    version,
    about = "Argumentation-based decision making over scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide which alternatives of an experiment are acceptable.
    Decide {
        /// Scenario document to load.
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated experiment members; defaults to all alternatives.
        #[arg(long)]
        experiment: Option<String>,
        /// Priority-order override, e.g. "nearer_store>nearer_robot>smaller".
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the marked dialectical tree of every active structure with a claim.
    Trace {
        /// Scenario document to load.
        #[arg(long)]
        scenario: PathBuf,
        /// The claim to explain, e.g. "better(box4,box6)".
        #[arg(long)]
        claim: String,
        /// Priority-order override.
        #[arg(long)]
        order: Option<String>,
    },
    /// Verify decisions against classical preference maximization and WARP.
    #[command(group(ArgGroup::new("source").required(true).args(["scenario", "random"])))]
    Check {
        /// Scenario document to verify.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Number of random scenarios to verify instead.
        #[arg(long)]
        random: Option<u32>,
        /// Seed for random scenario generation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay an event list, deciding after each step.
    Simulate {
        /// Scenario document to load.
        #[arg(long)]
        scenario: PathBuf,
        /// Events document, one event per line.
        #[arg(long)]
        events: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// One decision outcome: the justified conclusions, the chosen alternatives,
/// and the sizes of the active and warranted structure sets.
#[derive(Debug, Serialize)]
struct DecisionReport {
    justified: Vec<String>,
    chosen: Vec<String>,
    active_count: usize,
    warranted_count: usize,
}

#[derive(Debug, Serialize)]
struct SimulationStep {
    event: String,
    #[serde(flatten)]
    report: DecisionReport,
}

#[derive(Debug, Serialize)]
struct SimulationReport {
    steps: Vec<SimulationStep>,
}

/// Parses the CLI and runs the selected command, returning the process exit
/// code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            if is_cap_error(&err) {
                3
            } else {
                2
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_order_override(text: &str) -> Vec<String> {
    text.split('>')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn load_framework(
    path: &Path,
    order: Option<&str>,
) -> Result<(Scenario, DecisionFramework), CliError> {
    let scenario = load_scenario(&read_file(path)?)?;
    let override_ranking = order.map(parse_order_override);
    let adf = scenario.framework_with_order(override_ranking.as_deref())?;
    Ok((scenario, adf))
}

fn build_report(
    adf: &DecisionFramework,
    experiment: &BTreeSet<String>,
) -> Result<DecisionReport, CliError> {
    let mut justified: Vec<String> = adf.justified()?.iter().map(Literal::to_string).collect();
    justified.sort();
    let chosen: Vec<String> = adf
        .acceptable_alternatives(experiment)?
        .into_iter()
        .collect();
    let instance = adf.epistemic().instance();
    Ok(DecisionReport {
        justified,
        chosen,
        active_count: instance.active_structures()?.len(),
        warranted_count: instance.warranted_structures()?.len(),
    })
}

fn render_report_text(report: &DecisionReport) -> String {
    let mut out = String::new();
    out.push_str("justified conclusions:\n");
    for j in &report.justified {
        let _ = writeln!(out, "  {j}");
    }
    let chosen = if report.chosen.is_empty() {
        "(none)".to_string()
    } else {
        report.chosen.join(", ")
    };
    let _ = writeln!(out, "chosen: {chosen}");
    let _ = writeln!(out, "active structures: {}", report.active_count);
    let _ = writeln!(out, "warranted structures: {}", report.warranted_count);
    out
}

fn experiment_from_flag(adf: &DecisionFramework, flag: Option<&str>) -> BTreeSet<String> {
    match flag {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
        None => adf.alternatives().iter().map(String::from).collect(),
    }
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Decide {
            scenario,
            experiment,
            order,
            format,
        } => {
            let (_, adf) = load_framework(&scenario, order.as_deref())?;
            let members = experiment_from_flag(&adf, experiment.as_deref());
            let report = build_report(&adf, &members)?;
            match format {
                Format::Text => print!("{}", render_report_text(&report)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
            }
            Ok(0)
        }
        Command::Trace {
            scenario,
            claim,
            order,
        } => {
            let (_, adf) = load_framework(&scenario, order.as_deref())?;
            let claim: Literal = claim.parse()?;
            let instance = adf.epistemic().instance();
            let matching: Vec<_> = instance
                .active_structures()?
                .iter()
                .filter(|s| s.claim(instance.working()) == &claim)
                .cloned()
                .collect();
            if matching.is_empty() {
                println!("no active structure claims {claim}");
                return Ok(0);
            }
            let mut first = true;
            for structure in matching {
                if !first {
                    println!();
                }
                first = false;
                let tree = instance.dialectical_tree(&structure)?.mark_skeptical();
                print!("{}", tree.render(instance.working()));
            }
            Ok(0)
        }
        Command::Check {
            scenario,
            random,
            seed,
        } => match (scenario, random) {
            (Some(path), _) => {
                let loaded = load_scenario(&read_file(&path)?)?;
                match verify_scenario(&loaded)? {
                    None => {
                        println!(
                            "check passed: decisions match classical maximization and WARP holds"
                        );
                        Ok(0)
                    }
                    Some(failure) => {
                        eprintln!("{failure}");
                        print!("{}", loaded.render());
                        Ok(2)
                    }
                }
            }
            (None, Some(count)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for index in 0..count {
                    let generated = random_scenario(&mut rng);
                    let as_scenario = scenario_from_generated(&generated);
                    if let Some(failure) = verify_scenario(&as_scenario)? {
                        eprintln!("scenario {index} of seed {seed} failed: {failure}");
                        print!("{}", as_scenario.render());
                        return Ok(2);
                    }
                }
                println!(
                    "check passed: {count} random scenarios (seed {seed}) match classical maximization and WARP"
                );
                Ok(0)
            }
            (None, None) => unreachable!("clap enforces a source"),
        },
        Command::Simulate {
            scenario,
            events,
            format,
        } => {
            let mut current = load_scenario(&read_file(&scenario)?)?;
            let events = parse_events(&read_file(&events)?)?;
            let mut steps = Vec::new();
            let adf = current.framework()?;
            let all: BTreeSet<String> = adf.alternatives().iter().map(String::from).collect();
            steps.push(SimulationStep {
                event: "initial".to_string(),
                report: build_report(&adf, &all)?,
            });
            for event in &events {
                current = current.apply_event(event)?;
                let adf = current.framework()?;
                let all: BTreeSet<String> = adf.alternatives().iter().map(String::from).collect();
                steps.push(SimulationStep {
                    event: event.to_string(),
                    report: build_report(&adf, &all)?,
                });
            }
            match format {
                Format::Text => {
                    for (i, step) in steps.iter().enumerate() {
                        let chosen = if step.report.chosen.is_empty() {
                            "(none)".to_string()
                        } else {
                            step.report.chosen.join(", ")
                        };
                        println!("step {i} ({}): chosen {chosen}", step.event);
                    }
                }
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&SimulationReport { steps })?
                    );
                }
            }
            Ok(0)
        }
    }
}

/// Runs the classical cross-checks on one scenario: every experiment's
/// decision must equal preference maximization under the lexicographic
/// relation, and the resulting choice structure must satisfy WARP. Returns a
/// failure description, or None when everything matches.
fn verify_scenario(scenario: &Scenario) -> Result<Option<String>, CliError> {
    let adf = scenario.framework()?;
    let table = scenario.attribute_table()?;
    let relation = lex_preference(&table, adf.order())?;
    let structure = full_choice_structure(&adf)?;
    for (experiment, chosen) in structure.experiments() {
        let classical = c_star(experiment, &relation)?;
        if chosen != &classical {
            let members: Vec<&str> = experiment.iter().map(String::as_str).collect();
            return Ok(Some(format!(
                "experiment {{{}}}: decision {:?} differs from classical choice {:?}",
                members.join(", "),
                chosen.iter().collect::<Vec<_>>(),
                classical.iter().collect::<Vec<_>>(),
            )));
        }
    }
    if !satisfies_warp(&structure) {
        return Ok(Some(
            "choice structure violates the weak axiom of revealed preference".to_string(),
        ));
    }
    Ok(None)
}

/// Converts a generated scenario into a loadable raw-mode document value.
fn scenario_from_generated(g: &GeneratedScenario) -> Scenario {
    Scenario {
        world: World::Raw {
            alternatives: g.alternatives.iter().map(String::from).collect(),
            facts: g.evidence.iter().cloned().collect(),
        },
        criteria: g.criteria.iter().map(String::from).collect(),
        order: g.order.as_slice().to_vec(),
    }
}
