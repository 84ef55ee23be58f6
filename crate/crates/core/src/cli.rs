//! The `ail` command line.
//!
//! Exit codes: 0 for an affirmative result (true, valid, bisimilar,
//! accepted, all rows pass), 1 for a negative one, 2 for usage and input
//! errors.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::checker::{
    self, default_pool, find_countermodel, parse_catalogue, run_catalogue, section34, CatalogueError, CheckError,
    PointedModel, SearchBounds, Verdict,
};
use crate::fh::{self, FhError, FhFormula};
use crate::model::{self, load_model, model_to_json, random_model, EpistemicModel, LoadOptions, ModelError};
use crate::proof::{check_proof, CheckOptions, Proof, ProofError, ProofVerdict};
use crate::syntax::{parse, Agent, Atom, Formula, NameError, ParseError};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("formula: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Fh(#[from] FhError),
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Catalogue(#[from] CatalogueError),
    #[error(transparent)]
    Name(#[from] NameError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path} is not a valid model: {violations}")]
    InvalidModel { path: PathBuf, violations: String },
    #[error("unknown demo {0:?}; available: example4")]
    UnknownDemo(String),
    #[error("output: {0}")]
    Output(#[from] io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "ail", version, about = "Model checking, bounded validity search and proof checking for awareness-based indistinguishability logic")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// World bound for countermodel search.
    #[arg(long, global = true, default_value_t = 4)]
    max_worlds: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Model file (JSON). `example4.json` falls back to the bundled model.
    #[arg(short = 'm', long = "model")]
    model: PathBuf,
    /// Take the equivalence closure of pair-listed `ik` relations.
    #[arg(long)]
    close_ik: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula at a world.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'w', long)]
        world: String,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Whether a formula holds at every world of a model.
    Valid {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Search all models up to the world bound for one falsifying a formula.
    Countermodel {
        #[arg(short = 'f', long)]
        formula: String,
        /// Atom universe (defaults to the formula's atoms).
        #[arg(long, value_delimiter = ',')]
        atoms: Option<Vec<String>>,
        /// Agent universe (defaults to the formula's agents).
        #[arg(long, value_delimiter = ',')]
        agents: Option<Vec<String>>,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Translate an FH formula into the AIL language.
    Translate {
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Decide whether two pointed models are bisimilar.
    Bisim {
        #[arg(long = "m1")]
        m1: PathBuf,
        #[arg(long = "w1")]
        w1: String,
        #[arg(long = "m2")]
        m2: PathBuf,
        #[arg(long = "w2")]
        w2: String,
        #[arg(long)]
        close_ik: bool,
    },
    /// Evaluate an FH formula under FH semantics.
    FhCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'w', long)]
        world: String,
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Check a Hilbert-style proof file.
    Prove {
        #[arg(short = 'p', long)]
        proof: PathBuf,
        /// Accept axiom lines that instantiate any schema.
        #[arg(long)]
        infer_axiom: bool,
        /// Random models on which an accepted conclusion is re-evaluated.
        #[arg(long, default_value_t = 200)]
        spot_checks: u64,
    },
    /// Run a bundled worked example.
    Demo { name: String },
    /// Run a catalogue of schemas with expected verdicts.
    Catalogue {
        /// `section34` for the bundled catalogue, or a catalogue file.
        name: String,
        /// Instantiation pool, `;`-separated (default `p; q; p & q; I[i] p`).
        #[arg(long)]
        pool: Option<String>,
    },
}

/// Lets `-m1 a.json` stand for `--m1 a.json`; clap only has one-letter
/// short flags.
fn normalize_args(argv: impl IntoIterator<Item = String>) -> Vec<String> {
    argv.into_iter()
        .map(|a| match a.as_str() {
            "-m1" | "-m2" | "-w1" | "-w2" => format!("-{a}"),
            _ => a,
        })
        .collect()
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(normalize_args(argv)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let json = cli.json;
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            if json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            }
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn yes_no(b: bool) -> i32 {
    if b {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

/// Loads and validates a model file.
fn load(path: &Path, close_ik: bool) -> Result<EpistemicModel, CliError> {
    let opts = LoadOptions { close_ik };
    let m = if !path.exists() && path.file_name().is_some_and(|n| n == "example4.json") {
        model::model_from_json(crate::assets::EXAMPLE4, opts)?
    } else {
        load_model(path, opts)?
    };
    m.validate().map_err(|violations| CliError::InvalidModel {
        path: path.to_path_buf(),
        violations: violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
    })?;
    Ok(m)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn emit(out: &mut dyn Write, json: bool, value: Value, text: &str) -> Result<(), CliError> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json values serialize"))?;
    } else {
        writeln!(out, "{text}")?;
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Check { model, world, formula } => {
            let f = parse(&formula)?;
            let pm = PointedModel::new(load(&model.model, model.close_ik)?, &world)?;
            let value = checker::satisfies(&pm, &f)?;
            emit(out, json, json!({ "formula": f.to_string(), "world": world, "value": value }), &value.to_string())?;
            Ok(yes_no(value))
        }
        Command::Valid { model, formula } => {
            let f = parse(&formula)?;
            let m = load(&model.model, model.close_ik)?;
            let ext = checker::extension(&m, &f)?;
            let failing: Vec<&str> = (0..m.world_count()).filter(|&w| !ext.contains(w)).map(|w| m.world_name(w)).collect();
            let valid = failing.is_empty();
            let text = if valid { "valid".to_string() } else { format!("not valid; fails at {}", failing.join(", ")) };
            emit(out, json, json!({ "formula": f.to_string(), "valid": valid, "failing_worlds": failing }), &text)?;
            Ok(yes_no(valid))
        }
        Command::Countermodel { formula, atoms, agents, timeout } => {
            let f = parse(&formula)?;
            let mut bounds = SearchBounds::new(cli.max_worlds);
            if let Some(atoms) = atoms {
                bounds = bounds.with_atoms(atoms.iter().map(|a| a.trim().parse::<Atom>()).collect::<Result<_, _>>()?);
            }
            if let Some(agents) = agents {
                bounds = bounds.with_agents(agents.iter().map(|a| a.trim().parse::<Agent>()).collect::<Result<_, _>>()?);
            }
            if let Some(secs) = timeout {
                bounds = bounds.with_deadline(Duration::from_secs_f64(secs.max(0.0)));
            }
            let outcome = find_countermodel(&f, &bounds)?;
            if json {
                let witness = outcome
                    .witness
                    .as_ref()
                    .map(|w| json!({ "world": w.world_name(), "model": model_to_json(&w.model) }));
                let value = json!({
                    "formula": f.to_string(),
                    "verdict": outcome.verdict,
                    "max_worlds": cli.max_worlds,
                    "models_checked": outcome.models_checked,
                    "closure_size": outcome.closure_size,
                    "witness": witness,
                });
                emit(out, true, value, "")?;
            } else {
                writeln!(out, "{}", outcome.verdict)?;
                writeln!(out, "models checked: {} (worlds <= {})", outcome.models_checked, cli.max_worlds)?;
                if let Some(n) = outcome.closure_size {
                    writeln!(out, "completeness bound: 2^{n} worlds (|cl| = {n})")?;
                }
                if let Some(w) = &outcome.witness {
                    writeln!(out, "world: {}", w.world_name())?;
                    writeln!(out, "{}", serde_json::to_string_pretty(&model_to_json(&w.model)).expect("json values serialize"))?;
                }
            }
            Ok(yes_no(outcome.verdict == Verdict::ValidUpToBound))
        }
        Command::Translate { formula } => {
            let f = FhFormula::new(parse(&formula)?)?;
            let t = fh::translate(&f);
            emit(out, json, json!({ "formula": f.to_string(), "translation": t.to_string() }), &t.to_string())?;
            Ok(EXIT_YES)
        }
        Command::Bisim { m1, w1, m2, w2, close_ik } => {
            let pm1 = PointedModel::new(load(&m1, close_ik)?, &w1)?;
            let pm2 = PointedModel::new(load(&m2, close_ik)?, &w2)?;
            let found = fh::find_bisimulation(&pm1, &pm2)?;
            match &found {
                Some(r) => {
                    let (a1, a2) = fh::align_signatures(&pm1.model, &pm2.model)?;
                    let pairs = r.named_pairs(&a1, &a2);
                    let text = std::iter::once("bisimilar".to_string())
                        .chain(pairs.iter().map(|[x, y]| format!("{x} ~ {y}")))
                        .collect::<Vec<_>>()
                        .join("\n");
                    emit(out, json, json!({ "bisimilar": true, "relation": pairs }), &text)?;
                }
                None => emit(out, json, json!({ "bisimilar": false }), "not-bisimilar")?,
            }
            Ok(yes_no(found.is_some()))
        }
        Command::FhCheck { model, world, formula } => {
            let f = FhFormula::new(parse(&formula)?)?;
            let pm = PointedModel::new(load(&model.model, model.close_ik)?, &world)?;
            let value = fh::satisfies_fh(&pm, &f)?;
            emit(out, json, json!({ "formula": f.to_string(), "world": world, "value": value }), &value.to_string())?;
            Ok(yes_no(value))
        }
        Command::Prove { proof, infer_axiom, spot_checks } => {
            let pf = Proof::from_json(&read(&proof)?)?;
            match check_proof(&pf, CheckOptions { infer_axiom }) {
                ProofVerdict::Accepted => {
                    let falsified = match pf.conclusion() {
                        Some(f) => spot_check(f, spot_checks, cli.seed)?,
                        None => None,
                    };
                    if let Some(seed) = falsified {
                        let text = format!("accepted, but the conclusion fails on the random model with seed {seed}");
                        emit(out, json, json!({ "verdict": "accepted", "spot_check_failure_seed": seed }), &text)?;
                        return Ok(EXIT_NO);
                    }
                    emit(out, json, json!({ "verdict": "accepted", "lines": pf.lines.len(), "spot_checks": spot_checks }), "accepted")?;
                    Ok(EXIT_YES)
                }
                ProofVerdict::Rejected { line, reason } => {
                    let value = json!({ "verdict": "rejected", "line": line, "reason": reason.to_string(), "detail": reason });
                    emit(out, json, value, &format!("rejected at line {line}: {reason}"))?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Demo { name } => {
            if name != "example4" {
                return Err(CliError::UnknownDemo(name));
            }
            demo_example4(out, json)
        }
        Command::Catalogue { name, pool } => {
            let rows = if name == "section34" { section34() } else { parse_catalogue(&read(Path::new(&name))?)? };
            let pool = match pool {
                Some(p) => p.split(';').map(|s| parse(s.trim())).collect::<Result<Vec<_>, _>>()?,
                None => default_pool(),
            };
            let reports = run_catalogue(&rows, &pool, &SearchBounds::new(cli.max_worlds))?;
            let all_pass = reports.iter().all(|r| r.passed());
            if json {
                let rows: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        json!({
                            "name": r.report.schema,
                            "expected": r.expected.to_string(),
                            "verdict": r.report.verdict(),
                            "pass": r.passed(),
                            "instances": r.report.instances.len(),
                            "counterexample": r.report.first_countermodel().map(|i| i.formula.to_string()),
                        })
                    })
                    .collect();
                emit(out, true, json!({ "max_worlds": cli.max_worlds, "all_pass": all_pass, "rows": rows }), "")?;
            } else {
                let width = reports.iter().map(|r| r.report.schema.len()).max().unwrap_or(0);
                for r in &reports {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    let mut line = format!(
                        "{status}  {:<7}  {:<width$}  {} ({} instances)",
                        r.expected.to_string(),
                        r.report.schema,
                        r.report.verdict(),
                        r.report.instances.len()
                    );
                    if let Some(i) = r.report.first_countermodel() {
                        line.push_str(&format!("  e.g. {}", i.formula));
                    }
                    writeln!(out, "{line}")?;
                }
                let passed = reports.iter().filter(|r| r.passed()).count();
                writeln!(out, "{passed}/{} rows pass (worlds <= {})", reports.len(), cli.max_worlds)?;
            }
            Ok(yes_no(all_pass))
        }
    }
}

/// Evaluates `f` at every world of `count` random models over its own
/// signature; returns the seed of the first falsifying model.
fn spot_check(f: &Formula, count: u64, seed: u64) -> Result<Option<u64>, CliError> {
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    let agents: Vec<Agent> = f.agents().into_iter().collect();
    for k in 0..count {
        let s = seed.wrapping_add(k);
        let m = random_model(&atoms, &agents, 1 + (k % 5) as usize, s);
        if !checker::model_valid(&m, f)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// The worked example: `(formula, expected value)` at world `w`.
const EXAMPLE4_CHECKS: [(&str, &str, bool); 21] = [
    ("(1)", "A[a] p2", true),
    ("(1)", "A[a] p3", true),
    ("(1)", "A[a] f3", true),
    ("(1)", "A[a] p4", true),
    ("(2)", "A[b] p2", true),
    ("(2)", "~A[b] p3", true),
    ("(2)", "A[b] f3", true),
    ("(2)", "A[b] p4", true),
    ("(3)", "I[a] f3", true),
    ("(3)", "I[b] f3", true),
    ("(4)", "I[a](p2 & p3 & f3 -> p4)", true),
    ("(4)", "I[b](p2 & p3 & f3 -> p4)", true),
    ("(5)", "I[a] p2 & I[a] p3", true),
    ("(5)", "I[b] p2 & I[b] p3", true),
    ("(6)", "I[a] p4", true),
    ("(6)", "I[b] p4", true),
    ("b", "~A[b] p3 & A[b](p2 & f3 & p4) & I[b](p2 & p3 & f3) & I[b](p2 & p3 & f3 -> p4) & I[b] p4 & ~E[b] p4", true),
    ("b", "A[b](p2 & p3 & f3)", false),
    ("b", "C[b] p4", false),
    ("(7)", "E[a] p4", true),
    ("b", "E[b] p4", false),
];

fn demo_example4(out: &mut dyn Write, json: bool) -> Result<i32, CliError> {
    let pm = PointedModel::new(crate::assets::example4(), "w")?;
    let mut rows = Vec::new();
    let mut all_match = true;
    for (label, text, expected) in EXAMPLE4_CHECKS {
        let f = parse(text).expect("demo formula parses");
        let value = checker::satisfies(&pm, &f)?;
        all_match &= value == expected;
        rows.push((label, f, value, expected));
    }
    if json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(label, f, value, expected)| {
                json!({ "item": label, "formula": f.to_string(), "value": value, "expected": expected })
            })
            .collect();
        emit(out, true, json!({ "model": "example4", "world": "w", "checks": rows, "all_match": all_match }), "")?;
    } else {
        writeln!(out, "example4 at world w")?;
        for (label, f, value, expected) in &rows {
            let mark = if value == expected { "" } else { "  (MISMATCH)" };
            writeln!(out, "{label:<4} {f}: {value}{mark}")?;
        }
    }
    Ok(yes_no(all_match))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("ail").chain(args.iter().copied()).map(String::from);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_on_bundled_model() {
        let (code, out, _) = run_str(&["check", "-m", "example4.json", "-w", "w", "-f", "p4"]);
        assert_eq!((code, out.trim()), (0, "true"));
        let (code, out, _) = run_str(&["check", "-m", "example4.json", "-w", "w", "-f", "E[b] p4"]);
        assert_eq!((code, out.trim()), (1, "false"));
    }

    #[test]
    fn demo_ends_with_the_explicit_knowledge_pair() {
        let (code, out, _) = run_str(&["demo", "example4"]);
        assert_eq!(code, 0, "{out}");
        let tail: Vec<&str> = out.lines().rev().take(2).collect();
        assert!(tail[1].ends_with("E[a] p4: true"), "{out}");
        assert!(tail[0].ends_with("E[b] p4: false"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["check", "-m", "example4.json", "-w", "w"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["check", "-m", "example4.json", "-w", "nowhere", "-f", "p4"]).0, 2);
        assert_eq!(run_str(&["check", "-m", "example4.json", "-w", "w", "-f", "p4 &"]).0, 2);
        assert_eq!(run_str(&["demo", "example5"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn short_two_letter_flags() {
        assert_eq!(
            normalize_args(["ail", "bisim", "-m1", "a", "-w2", "x"].map(String::from)),
            ["ail", "bisim", "--m1", "a", "--w2", "x"]
        );
    }

    #[test]
    fn countermodel_json() {
        let (code, out, _) = run_str(&["--json", "--max-worlds", "3", "countermodel", "-f", "I[i] p -> E[i] I[i] p"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "countermodel-found");
        let w = &v["witness"];
        let m = model::model_from_json(&w["model"].to_string(), LoadOptions::default()).unwrap();
        let pm = PointedModel::new(m, w["world"].as_str().unwrap()).unwrap();
        assert!(!checker::satisfies(&pm, &parse("I[i] p -> E[i] I[i] p").unwrap()).unwrap());
    }

    #[test]
    fn translate_prints_the_translation() {
        let (code, out, _) = run_str(&["translate", "-f", "E[i] p"]);
        assert_eq!((code, out.trim()), (0, "A[i] p & I[i] p"));
        assert_eq!(run_str(&["translate", "-f", "C[i] p"]).0, 2);
    }
}
