//! Batch front end: parse specs, formulas and automata, dispatch the library
//! operations, and emit JSON reports plus DOT artifacts.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when a verdict-equality
//! assertion fails (the two sides of a cross-checked construction disagree).

mod inputs;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use starfree::automata::{Alphabet, Dfa, Symbol, Word};
use starfree::basechange::{expand_dfa, group_dfa, group_dfa_strict, BaseChangeError};
use starfree::logic::{
    compile_sf, default_slack, define_set, eval_num, eval_sf, num_to_sf, print_num, print_sf,
    sf_to_num, word_model, Valuation,
};
use starfree::numeration::NumerationSystem;
use starfree::padic::{to_adic, to_ary, transfer_check, PadicError};
use starfree::setspec::{classify, default_probes};

use inputs::{
    input_error, load_any_formula, load_automaton, load_spec, load_system, AnyFormula,
};
use report::{Emitter, Report, Target};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    VerdictMismatch(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(message) => write!(f, "input error: {message}"),
            CliError::VerdictMismatch(message) => write!(f, "verdict mismatch: {message}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "starfree",
    version,
    about = "Star-free representability of integer sets across numeration systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EmitArgs {
    /// Output directory for artifacts (default: $STARFREE_OUT_DIR or .)
    #[arg(long)]
    out_dir: Option<String>,
    /// Comma-separated artifact formats: json,dot
    #[arg(long)]
    emit: Option<String>,
    /// Basename for emitted artifacts
    #[arg(short = 'o', long)]
    name: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Convert numbers to representations and back
    Repr {
        /// System: base:K, bijective:P, fib, inline JSON or a path
        #[arg(long)]
        system: String,
        /// Number to represent
        #[arg(long)]
        n: Option<String>,
        /// Digit word to evaluate (most-significant first)
        #[arg(long)]
        word: Option<String>,
    },
    /// Compile a set spec into its padded-representation recognizer
    Build {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        system: String,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Aperiodicity and definiteness verdicts with witnesses
    Analyze {
        /// Automaton JSON (inline or path); alternative to --spec
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        system: Option<String>,
        /// Transition-monoid element cap
        #[arg(long, default_value_t = starfree::automata::DEFAULT_MONOID_CAP)]
        monoid_cap: usize,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Classify a set into the four star-freeness categories
    Classify {
        #[arg(long)]
        spec: String,
        /// Comma-separated probe bases (default: 2..12 plus i*P)
        #[arg(long)]
        probes: Option<String>,
    },
    /// Group a base-p recognizer into base p^k
    Group {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        k: u32,
        /// Reject sources without the leading-zero closure instead of closing
        #[arg(long)]
        strict: bool,
        /// Membership-agreement horizon
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Expand a base-p^k recognizer to base p, letter by block
    Expand {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Word-logic and number-logic operations
    Logic {
        #[command(subcommand)]
        command: LogicCommand,
    },
    /// Zero-free digit systems and the normalization pipeline
    Padic {
        #[command(subcommand)]
        command: PadicCommand,
    },
    /// Re-validate the witnesses carried by a report file
    ValidateReport {
        #[arg(long)]
        report: String,
    },
}

#[derive(Subcommand)]
enum LogicCommand {
    /// Evaluate a formula: word logic on --word, number logic on --n
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        system: Option<String>,
        /// Search window beyond the representation length
        #[arg(long)]
        slack: Option<usize>,
    },
    /// Compile a word-logic sentence to its automaton
    Compile {
        #[arg(long)]
        formula: String,
        /// Largest digit of the word alphabet
        #[arg(long, default_value_t = 1)]
        max_digit: u32,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Translate between the two logics (direction by formula shape)
    Translate {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        system: Option<String>,
    },
    /// Enumerate the set defined by a number-logic formula
    DefineSet {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 4096)]
        horizon: u64,
        #[arg(long)]
        slack: Option<usize>,
        /// Skip the automaton-route cross-validation
        #[arg(long)]
        no_cross_check: bool,
    },
}

#[derive(Subcommand)]
enum PadicCommand {
    /// Zero-free recognizer to padded greedy recognizer
    ToAry {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Padded greedy recognizer to zero-free recognizer
    ToAdic {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Build both representation languages of a set and compare verdicts
    Check {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        p: u32,
    },
}

fn parse_nat(text: &str) -> Result<BigUint, CliError> {
    text.parse::<BigUint>()
        .map_err(|_| input_error(format!("bad number {text:?}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Repr { system, n, word } => {
            let system = load_system(&system)?;
            match (n, word) {
                (Some(n), None) => {
                    let n = parse_nat(&n)?;
                    let repr = if system.is_greedy() {
                        system.greedy_repr(&n)
                    } else {
                        system.bijective_repr(&n)
                    }
                    .map_err(|e| input_error(e.to_string()))?;
                    println!("{repr}");
                }
                (None, Some(word)) => {
                    let word = Word::parse_digits(&word).map_err(|e| input_error(e.to_string()))?;
                    let value = system.value(&word).map_err(|e| input_error(e.to_string()))?;
                    println!("{value}");
                }
                _ => return Err(input_error("repr needs exactly one of --n or --word")),
            }
        }
        Command::Build { spec, system, emit } => {
            let spec = load_spec(&spec)?;
            let system = load_system(&system)?;
            let dfa = starfree::setspec::spec_to_dfa(&spec, &system)
                .map_err(|e| input_error(e.to_string()))?;
            let name = emit.name.clone().unwrap_or_else(|| "recognizer".into());
            let emitter = Emitter::new(emit.out_dir, emit.emit.as_deref())?;
            let artifacts = emitter.write(&name, &dfa)?;
            if artifacts.is_empty() {
                println!("{}", dfa.to_json());
            } else {
                let mut report = Report::new("build");
                let mut target = Target::named(name);
                target.states = Some(dfa.state_count());
                target.artifacts = artifacts;
                report.targets.push(target);
                report.elapsed_ms = started.elapsed().as_millis();
                println!("{}", report.to_json());
            }
        }
        Command::Analyze {
            automaton,
            spec,
            system,
            monoid_cap,
            emit,
        } => {
            let (name, dfa) = match (automaton, spec) {
                (Some(automaton), None) => ("automaton".to_string(), load_automaton(&automaton)?),
                (None, Some(spec_text)) => {
                    let spec = load_spec(&spec_text)?;
                    let system = system.ok_or_else(|| input_error("--spec needs --system"))?;
                    let system = load_system(&system)?;
                    let dfa = starfree::setspec::spec_to_dfa(&spec, &system)
                        .map_err(|e| input_error(e.to_string()))?;
                    (spec_text, dfa)
                }
                _ => {
                    return Err(input_error(
                        "analyze needs exactly one of --automaton or --spec",
                    ))
                }
            };
            let aperiodicity = dfa
                .is_aperiodic_capped(monoid_cap)
                .map_err(|e| input_error(e.to_string()))?;
            let definiteness = dfa.is_definite();
            let emitter = Emitter::new(emit.out_dir, emit.emit.as_deref())?;
            let artifact_name = emit.name.unwrap_or_else(|| "analyzed".into());
            let artifacts = emitter.write(&artifact_name, &dfa)?;
            let json_artifact = artifacts.iter().find(|p| p.ends_with(".json")).cloned();
            let mut report = Report::new("analyze");
            let mut target = Target::named(name).with_verdicts(
                &dfa,
                &aperiodicity,
                &definiteness,
                json_artifact.as_deref(),
            );
            target.artifacts = artifacts;
            report.targets.push(target);
            report.elapsed_ms = started.elapsed().as_millis();
            println!("{}", report.to_json());
        }
        Command::Classify { spec, probes } => {
            let spec = load_spec(&spec)?;
            let probes = match probes {
                Some(probes) => probes
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<u32>()
                            .map_err(|_| input_error(format!("bad probe base {p:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                None => default_probes(None),
            };
            let category = classify(&spec, &probes).map_err(|e| input_error(e.to_string()))?;
            let mut report = Report::new("classify");
            let mut target = Target::named("spec");
            target.category =
                Some(serde_json::to_value(&category).expect("category serializes"));
            report.targets.push(target);
            report.elapsed_ms = started.elapsed().as_millis();
            println!("{}", report.to_json());
        }
        Command::Group {
            automaton,
            k,
            strict,
            horizon,
            emit,
        } => {
            let dfa = load_automaton(&automaton)?;
            let grouped = if strict {
                group_dfa_strict(&dfa, k)
            } else {
                group_dfa(&dfa, k)
            }
            .map_err(base_change_error)?;
            let check = starfree::basechange::grouping_preservation_check(&dfa, k, horizon)
                .map_err(base_change_error)?;
            let aperiodicity = grouped
                .is_aperiodic()
                .map_err(|e| input_error(e.to_string()))?;
            let definiteness = grouped.is_definite();
            let name = emit.name.clone().unwrap_or_else(|| format!("grouped-k{k}"));
            let emitter = Emitter::new(emit.out_dir, emit.emit.as_deref())?;
            let artifacts = emitter.write(&name, &grouped)?;
            let json_artifact = artifacts.iter().find(|a| a.ends_with(".json")).cloned();
            let mut report = Report::new("group");
            let mut target = Target::named(name).with_verdicts(
                &grouped,
                &aperiodicity,
                &definiteness,
                json_artifact.as_deref(),
            );
            target.note = Some(format!(
                "source aperiodic: {}; grouped aperiodic: {}",
                check.source_aperiodic, check.grouped_aperiodic
            ));
            target.agreement = Some(format!("{}/{}", check.agreement, check.sampled));
            target.artifacts = artifacts;
            report.targets.push(target);
            report.elapsed_ms = started.elapsed().as_millis();
            println!("{}", report.to_json());
        }
        Command::Expand { automaton, p, emit } => {
            let dfa = load_automaton(&automaton)?;
            let source_aperiodic = dfa
                .is_aperiodic()
                .map_err(|e| input_error(e.to_string()))?
                .aperiodic;
            let expanded = expand_dfa(&dfa, p).map_err(base_change_error)?;
            let closed = expanded
                .leading_zero_closure(Symbol::Digit(0))
                .map_err(|e| input_error(e.to_string()))?
                .minimized();
            let aperiodicity = closed
                .is_aperiodic()
                .map_err(|e| input_error(e.to_string()))?;
            let definiteness = closed.is_definite();
            let name = emit.name.clone().unwrap_or_else(|| format!("expanded-p{p}"));
            let emitter = Emitter::new(emit.out_dir, emit.emit.as_deref())?;
            let artifacts = emitter.write(&name, &closed)?;
            let json_artifact = artifacts.iter().find(|a| a.ends_with(".json")).cloned();
            let mut report = Report::new("expand");
            let mut target = Target::named(name).with_verdicts(
                &closed,
                &aperiodicity,
                &definiteness,
                json_artifact.as_deref(),
            );
            if source_aperiodic && !aperiodicity.aperiodic {
                target.note = Some(
                    "source automaton is aperiodic but its letter-to-block expansion is not; \
                     block substitution does not preserve aperiodicity in general"
                        .into(),
                );
            }
            target.artifacts = artifacts;
            report.targets.push(target);
            report.elapsed_ms = started.elapsed().as_millis();
            println!("{}", report.to_json());
        }
        Command::Logic { command } => run_logic(command, started)?,
        Command::Padic { command } => run_padic(command, started)?,
        Command::ValidateReport { report } => {
            let loaded = Report::load(&report)?;
            println!(
                "report {:?} valid: {} target(s), every witness re-validated",
                report,
                loaded.targets.len()
            );
        }
    }
    Ok(())
}

fn run_logic(command: LogicCommand, started: Instant) -> Result<(), CliError> {
    match command {
        LogicCommand::Eval {
            formula,
            word,
            n,
            system,
            slack,
        } => match load_any_formula(&formula)? {
            AnyFormula::Word(sentence) => {
                let word = word.ok_or_else(|| input_error("word-logic eval needs --word"))?;
                let word = Word::parse_digits(&word).map_err(|e| input_error(e.to_string()))?;
                let model = word_model(&word).map_err(|e| input_error(e.to_string()))?;
                let value = eval_sf(&sentence, &model, &Valuation::new())
                    .map_err(|e| input_error(e.to_string()))?;
                println!("{value}");
            }
            AnyFormula::Number(formula) => {
                let n = n.ok_or_else(|| input_error("number-logic eval needs --n"))?;
                let n = parse_nat(&n)?;
                let system =
                    system.ok_or_else(|| input_error("number-logic eval needs --system"))?;
                let system = load_system(&system)?;
                let slack = match slack {
                    Some(s) => s,
                    None => {
                        default_slack(&formula, &system).map_err(|e| input_error(e.to_string()))?
                    }
                };
                let value = eval_num(&formula, &n, &system, slack)
                    .map_err(|e| input_error(e.to_string()))?;
                println!("{value}");
            }
        },
        LogicCommand::Compile {
            formula,
            max_digit,
            emit,
        } => {
            let AnyFormula::Word(sentence) = load_any_formula(&formula)? else {
                return Err(input_error("compile takes a word-logic sentence"));
            };
            let alphabet = Alphabet::digits(max_digit);
            let dfa = compile_sf(&sentence, &alphabet).map_err(|e| input_error(e.to_string()))?;
            emit_or_print(dfa, emit, "logic compile", started)?;
        }
        LogicCommand::Translate { formula, system } => {
            let system = match system {
                Some(text) => load_system(&text)?,
                None => NumerationSystem::base(2).expect("base 2 is valid"),
            };
            match load_any_formula(&formula)? {
                AnyFormula::Number(formula) => println!("{}", print_sf(&num_to_sf(&formula))),
                AnyFormula::Word(sentence) => {
                    let translated =
                        sf_to_num(&sentence, &system).map_err(|e| input_error(e.to_string()))?;
                    println!("{}", print_num(&translated));
                }
            }
        }
        LogicCommand::DefineSet {
            formula,
            system,
            horizon,
            slack,
            no_cross_check,
        } => {
            let AnyFormula::Number(formula) = load_any_formula(&formula)? else {
                return Err(input_error("define-set takes a number-logic formula"));
            };
            let system = load_system(&system)?;
            let members = define_set(&formula, &system, horizon, slack)
                .map_err(|e| input_error(e.to_string()))?;
            if !no_cross_check {
                let dfa = starfree::logic::formula_language(&formula, &system)
                    .map_err(|e| input_error(e.to_string()))?;
                let by_dfa = starfree::logic::accepted_values(&dfa, &system, horizon)
                    .map_err(|e| input_error(e.to_string()))?;
                if members != by_dfa {
                    return Err(CliError::VerdictMismatch(
                        "evaluator and compiled automaton disagree on the defined set".into(),
                    ));
                }
            }
            for member in members {
                println!("{member}");
            }
        }
    }
    Ok(())
}

fn run_padic(command: PadicCommand, started: Instant) -> Result<(), CliError> {
    match command {
        PadicCommand::ToAry { automaton, p, emit } => {
            let dfa = load_automaton(&automaton)?;
            let result = to_ary(&dfa, p).map_err(padic_error)?;
            emit_or_print(result, emit, "to-ary", started)?;
        }
        PadicCommand::ToAdic { automaton, p, emit } => {
            let dfa = load_automaton(&automaton)?;
            let result = to_adic(&dfa, p).map_err(padic_error)?;
            emit_or_print(result, emit, "to-adic", started)?;
        }
        PadicCommand::Check { spec, p } => {
            let spec = load_spec(&spec)?;
            let report = transfer_check(&spec, p).map_err(padic_error)?;
            let mut out = Report::new("padic check");
            let mut target = Target::named("transfer");
            target.aperiodic = Some(report.ary_aperiodic);
            target.note = Some(format!(
                "padded greedy language aperiodic: {}; zero-free language aperiodic: {}",
                report.ary_aperiodic, report.adic_aperiodic
            ));
            out.targets.push(target);
            out.elapsed_ms = started.elapsed().as_millis();
            println!("{}", out.to_json());
        }
    }
    Ok(())
}

fn emit_or_print(
    dfa: Dfa,
    emit: EmitArgs,
    command: &str,
    started: Instant,
) -> Result<(), CliError> {
    let name = emit.name.clone().unwrap_or_else(|| {
        command
            .split_whitespace()
            .last()
            .unwrap_or("artifact")
            .to_string()
    });
    let emitter = Emitter::new(emit.out_dir, emit.emit.as_deref())?;
    let artifacts = emitter.write(&name, &dfa)?;
    if artifacts.is_empty() {
        println!("{}", dfa.to_json());
    } else {
        let mut report = Report::new(command);
        let mut target = Target::named(name);
        target.states = Some(dfa.state_count());
        target.artifacts = artifacts;
        report.targets.push(target);
        report.elapsed_ms = started.elapsed().as_millis();
        println!("{}", report.to_json());
    }
    Ok(())
}

fn base_change_error(error: BaseChangeError) -> CliError {
    match error {
        BaseChangeError::PreservationViolated => CliError::VerdictMismatch(error.to_string()),
        other => input_error(other.to_string()),
    }
}

fn padic_error(error: PadicError) -> CliError {
    match error {
        PadicError::VerdictMismatch => CliError::VerdictMismatch(error.to_string()),
        other => input_error(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            // clap's help/version output exits cleanly; bad flags are input errors
            if error.use_stderr() {
                eprintln!("{error}");
                return ExitCode::from(1);
            }
            print!("{error}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(message)) => {
            eprintln!("input error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::VerdictMismatch(message)) => {
            eprintln!("verdict mismatch: {message}");
            ExitCode::from(2)
        }
    }
}
