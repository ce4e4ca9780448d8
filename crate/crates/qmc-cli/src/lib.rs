//! Command-line front end: file loading, command dispatch and reports.
//!
//! Exit codes are a contract: 0 = the property holds, 1 = violated (with a
//! witness), 2 = input or contract error, 3 = inconclusive (the bounded
//! fixture search ran out of budget).

pub mod formats;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qmc_core::eigenreduce::{build_ts, check_invariant_via_ts};
use qmc_core::fixtures::{locally_equivalent, Reachability};
use qmc_core::invcheck::{check_invariant, check_persistence, CheckReport};
use qmc_core::ltcheck::{check_omega, check_safety, PropertyKind};
use qmc_core::qautomaton::PathFragment;
use qmc_core::{Error, Subspace, Tolerances};
use serde_json::{json, Value};

use formats::{
    fixture, fixture_names, load_model, load_property, LoadedModel, PropertyFile, ReachQuestion,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "qmc",
    about = "Model checking of linear-time properties for finite-dimensional quantum automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Model file (JSON, format_version 1).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Property file (JSON, format_version 1).
    #[arg(long, global = true)]
    property: Option<PathBuf>,
    /// Overrides the membership tolerance (residual threshold).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Engine for invariant and persistence checks.
    #[arg(long, global = true, value_enum, default_value_t = Engine::Auto)]
    engine: Engine,
    /// Emit the witness on violations.
    #[arg(long, global = true)]
    trace: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Dfs,
    Eigen,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Loads the model (and property, if given) and reports diagnostics.
    Validate,
    /// Prints a basis of the reachable subspace.
    Reachable,
    /// Checks an invariant property against the model.
    CheckInvariant,
    /// Checks a persistence property against the model.
    CheckPersistence,
    /// Checks a safety property given by its bad-prefix recognizer.
    CheckSafety,
    /// Checks an omega-property given by its violation recognizer.
    CheckOmega,
    /// Prints the classical transition system over eigenstates.
    EigenReduce,
    /// Lists built-in fixtures, emits them, or runs a reachability fixture.
    Fixtures {
        /// Fixture name; omit to list all names.
        name: Option<String>,
        /// Emit the fixture's property file instead of its model file.
        #[arg(long)]
        emit_property: bool,
        /// Run the bounded ray-reachability search from a property file of
        /// kind `reachability`.
        #[arg(long)]
        check: Option<PathBuf>,
    },
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return EXIT_ERROR;
        }
    };
    let tol = Tolerances {
        membership_eps: cli.tolerance.unwrap_or(Tolerances::default().membership_eps),
        ..Tolerances::default()
    };
    match dispatch(&cli, &tol) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("{message}");
            EXIT_ERROR
        }
    }
}

fn require_model(cli: &Cli, tol: &Tolerances) -> Result<LoadedModel, String> {
    let path = cli
        .model
        .as_deref()
        .ok_or("missing --model PATH".to_string())?;
    load_model(path, tol).map_err(|d| d.to_string())
}

fn require_property(cli: &Cli, tol: &Tolerances) -> Result<PropertyFile, String> {
    let path = cli
        .property
        .as_deref()
        .ok_or("missing --property PATH".to_string())?;
    load_property(path, tol).map_err(|d| d.to_string())
}

fn target_subspace(vectors: &[qmc_core::CVector], dim: usize, tol: &Tolerances) -> Result<Subspace, String> {
    for v in vectors {
        if v.dim() != dim {
            return Err(format!(
                "target vector dimension {} does not match model dimension {dim}",
                v.dim()
            ));
        }
    }
    Ok(Subspace::span_of(vectors, dim, tol))
}

fn dispatch(cli: &Cli, tol: &Tolerances) -> Result<i32, String> {
    match &cli.command {
        Command::Validate => validate(cli, tol),
        Command::Reachable => reachable(cli, tol),
        Command::CheckInvariant => check_state_property(cli, tol, false),
        Command::CheckPersistence => check_state_property(cli, tol, true),
        Command::CheckSafety => check_linear_time(cli, tol, PropertyKind::Safety),
        Command::CheckOmega => check_linear_time(cli, tol, PropertyKind::Omega),
        Command::EigenReduce => eigen_reduce(cli, tol),
        Command::Fixtures {
            name,
            emit_property,
            check,
        } => fixtures_cmd(cli, tol, name.as_deref(), *emit_property, check.as_deref()),
    }
}

fn validate(cli: &Cli, tol: &Tolerances) -> Result<i32, String> {
    let model = require_model(cli, tol)?;
    let mut property_summary = Value::Null;
    if cli.property.is_some() {
        let property = require_property(cli, tol)?;
        property_summary = json!({ "kind": property.kind_name() });
    }
    match cli.format {
        OutputFormat::Text => {
            println!(
                "model ok: dim={}, {} action(s), {} proposition(s), commuting={}, join_closed={}",
                model.automaton.dim(),
                model.automaton.actions().len(),
                model.ap.len(),
                model.ap.is_commuting(),
                model.ap.is_join_closed()
            );
            if let Value::Object(p) = &property_summary {
                println!("property ok: kind={}", p["kind"].as_str().unwrap_or("?"));
            }
        }
        OutputFormat::Structured => {
            let out = json!({
                "format_version": 1,
                "command": "validate",
                "model": {
                    "dim": model.automaton.dim(),
                    "actions": model.automaton.action_names(),
                    "propositions": model.ap.names(),
                    "commuting": model.ap.is_commuting(),
                    "join_closed": model.ap.is_join_closed(),
                },
                "property": property_summary,
                "tolerances": tolerances_value(tol),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    Ok(EXIT_HOLDS)
}

fn reachable(cli: &Cli, tol: &Tolerances) -> Result<i32, String> {
    let model = require_model(cli, tol)?;
    let rs = model.automaton.reachable_subspace(tol);
    match cli.format {
        OutputFormat::Text => {
            println!("reachable subspace rank: {}", rs.rank());
            for (i, b) in rs.basis().iter().enumerate() {
                println!("basis[{i}]: {}", vector_text(b));
            }
        }
        OutputFormat::Structured => {
            let out = json!({
                "format_version": 1,
                "command": "reachable",
                "rank": rs.rank(),
                "basis": rs.basis().iter().map(vector_json).collect::<Vec<_>>(),
                "tolerances": tolerances_value(tol),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    Ok(EXIT_HOLDS)
}

fn check_state_property(cli: &Cli, tol: &Tolerances, persistence: bool) -> Result<i32, String> {
    let model = require_model(cli, tol)?;
    let property = require_property(cli, tol)?;
    let (target_vectors, command) = match (&property, persistence) {
        (PropertyFile::Invariant { target_vectors }, false) => (target_vectors, "check-invariant"),
        (PropertyFile::Persistence { target_vectors }, true) => {
            (target_vectors, "check-persistence")
        }
        _ => {
            return Err(format!(
                "property kind {:?} does not match this command",
                property.kind_name()
            ))
        }
    };
    let target = target_subspace(target_vectors, model.automaton.dim(), tol)?;
    let dfs = || {
        if persistence {
            check_persistence(&model.automaton, &model.ap, &target, tol)
        } else {
            check_invariant(&model.automaton, &model.ap, &target, tol)
        }
    };
    let (report, engine) = match cli.engine {
        Engine::Dfs => (dfs(), "dfs"),
        Engine::Eigen => (
            check_invariant_via_ts(&model.automaton, &model.ap, &target, tol),
            "eigen",
        ),
        Engine::Auto => match check_invariant_via_ts(&model.automaton, &model.ap, &target, tol) {
            Err(Error::DegenerateSpectrum(_)) => (dfs(), "dfs"),
            other => (other, "eigen"),
        },
    };
    let report = report.map_err(|e| e.to_string())?;
    emit_report(cli, tol, command, engine, &report);
    Ok(if report.verdict {
        EXIT_HOLDS
    } else {
        EXIT_VIOLATED
    })
}

fn check_linear_time(cli: &Cli, tol: &Tolerances, kind: PropertyKind) -> Result<i32, String> {
    let model = require_model(cli, tol)?;
    let property = require_property(cli, tol)?;
    let PropertyFile::LinearTime { spec } = &property else {
        return Err(format!(
            "property kind {:?} does not match this command",
            property.kind_name()
        ));
    };
    if spec.kind != kind {
        return Err(format!(
            "property kind {:?} does not match this command",
            property.kind_name()
        ));
    }
    let (report, command) = match kind {
        PropertyKind::Safety => (
            check_safety(&model.automaton, &model.ap, spec, tol),
            "check-safety",
        ),
        PropertyKind::Omega => (
            check_omega(&model.automaton, &model.ap, spec, tol),
            "check-omega",
        ),
    };
    let report = report.map_err(|e| e.to_string())?;
    emit_report(cli, tol, command, "dfs", &report);
    Ok(if report.verdict {
        EXIT_HOLDS
    } else {
        EXIT_VIOLATED
    })
}

fn eigen_reduce(cli: &Cli, tol: &Tolerances) -> Result<i32, String> {
    let model = require_model(cli, tol)?;
    let ts = build_ts(&model.automaton, tol).map_err(|e| e.to_string())?;
    match cli.format {
        OutputFormat::Text => {
            println!("eigenstates: {}", ts.states().len());
            for (i, (name, _)) in ts.states().iter().enumerate() {
                let init = if ts.initials().contains(&i) { " (initial)" } else { "" };
                println!("state[{i}]: {name}{init}");
            }
            for (a, b) in ts.transitions() {
                println!("transition: {a} -> {b}");
            }
        }
        OutputFormat::Structured => {
            let out = json!({
                "format_version": 1,
                "command": "eigen-reduce",
                "states": ts.states().iter().map(|(n, v)| json!({
                    "name": n,
                    "vector": vector_json(v),
                })).collect::<Vec<_>>(),
                "initials": ts.initials(),
                "transitions": ts.transitions().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "tolerances": tolerances_value(tol),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    Ok(EXIT_HOLDS)
}

fn fixtures_cmd(
    cli: &Cli,
    tol: &Tolerances,
    name: Option<&str>,
    emit_property: bool,
    check: Option<&Path>,
) -> Result<i32, String> {
    if let Some(path) = check {
        let property = load_property(path, tol).map_err(|d| d.to_string())?;
        let PropertyFile::Reachability { question } = property else {
            return Err("the --check file must have kind \"reachability\"".to_string());
        };
        return run_reachability(cli, tol, &question);
    }
    match name {
        None => {
            for n in fixture_names() {
                println!("{n}");
            }
            Ok(EXIT_HOLDS)
        }
        Some(n) => match fixture(n, tol) {
            Some((model, property)) => {
                let out = if emit_property { property } else { model };
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
                Ok(EXIT_HOLDS)
            }
            None => Err(format!("unknown fixture {n:?}; run `qmc fixtures` to list")),
        },
    }
}

fn run_reachability(cli: &Cli, tol: &Tolerances, q: &ReachQuestion) -> Result<i32, String> {
    let outcome = locally_equivalent(&q.gates, q.sites, &q.source, &q.target, tol)
        .map_err(|e| e.to_string())?;
    let (text, code) = match outcome {
        Reachability::Reachable => ("reachable", EXIT_HOLDS),
        Reachability::Unreachable => ("unreachable", EXIT_VIOLATED),
        Reachability::Inconclusive => ("inconclusive: search budget exhausted", EXIT_INCONCLUSIVE),
    };
    match cli.format {
        OutputFormat::Text => println!("{text}"),
        OutputFormat::Structured => {
            let out = json!({
                "format_version": 1,
                "command": "fixtures --check",
                "outcome": match outcome {
                    Reachability::Reachable => "reachable",
                    Reachability::Unreachable => "unreachable",
                    Reachability::Inconclusive => "inconclusive",
                },
                "tolerances": tolerances_value(tol),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
    Ok(code)
}

fn tolerances_value(tol: &Tolerances) -> Value {
    json!({
        "membership_eps": tol.membership_eps,
        "unitarity_eps": tol.unitarity_eps,
        "degeneracy_gap": tol.degeneracy_gap,
        "overlap_eps": tol.overlap_eps,
    })
}

fn vector_json(v: &qmc_core::CVector) -> Value {
    Value::Array(
        v.entries()
            .iter()
            .map(|c| json!([c.re, c.im]))
            .collect(),
    )
}

fn vector_text(v: &qmc_core::CVector) -> String {
    let parts: Vec<String> = v
        .entries()
        .iter()
        .map(|c| format!("{:+.6}{:+.6}i", c.re, c.im))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn witness_json(w: &PathFragment) -> Value {
    json!({
        "actions": w.steps,
        "states": w.states.iter().map(vector_json).collect::<Vec<_>>(),
    })
}

fn emit_report(cli: &Cli, tol: &Tolerances, command: &str, engine: &str, report: &CheckReport) {
    match cli.format {
        OutputFormat::Text => {
            println!(
                "verdict: {}",
                if report.verdict { "holds" } else { "violated" }
            );
            println!("engine: {engine}");
            println!("visited_rank: {}", report.visited_rank);
            println!("iterations: {}", report.iterations);
            if cli.trace {
                if let Some(w) = &report.witness {
                    println!("witness actions: {}", w.steps.join(" "));
                    for (i, s) in w.states.iter().enumerate() {
                        println!("witness state[{i}]: {}", vector_text(s));
                    }
                }
                if let Some(chain) = &report.classical_witness {
                    println!("witness chain: {}", chain.join(" -> "));
                }
            }
        }
        OutputFormat::Structured => {
            let witness = if cli.trace {
                report
                    .witness
                    .as_ref()
                    .map(witness_json)
                    .unwrap_or(Value::Null)
            } else {
                Value::Null
            };
            let out = json!({
                "format_version": 1,
                "command": command,
                "engine": engine,
                "verdict": report.verdict,
                "witness": witness,
                "classical_witness": report.classical_witness,
                "visited_rank": report.visited_rank,
                "iterations": report.iterations,
                "tolerances": tolerances_value(tol),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
    }
}
