//! Input resolution: numeration systems, set specs, automata and formulas
//! given inline, as shorthand, or as file paths.

use std::fs;
use std::path::{Path, PathBuf};

use starfree::automata::Dfa;
use starfree::logic::{parse_num, parse_sf, NumFormula, SfFormula};
use starfree::numeration::{NumerationSystem, SystemConfig};
use starfree::setspec::{SetSpec, SpecConfig, UpSet};

use crate::CliError;

pub fn input_error(message: impl Into<String>) -> CliError {
    CliError::Input(message.into())
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {path}: {e}")))
}

/// `base:K`, `bijective:P`, `fib`/`fibonacci`, inline JSON, or a path to a
/// system config file.
pub fn load_system(text: &str) -> Result<NumerationSystem, CliError> {
    if let Some(k) = text.strip_prefix("base:") {
        let k: u32 = k.parse().map_err(|_| input_error(format!("bad base {k:?}")))?;
        return NumerationSystem::base(k).map_err(|e| input_error(e.to_string()));
    }
    if let Some(p) = text.strip_prefix("bijective:") {
        let p: u32 = p.parse().map_err(|_| input_error(format!("bad base {p:?}")))?;
        return NumerationSystem::bijective(p).map_err(|e| input_error(e.to_string()));
    }
    if text == "fib" || text == "fibonacci" {
        return Ok(NumerationSystem::fibonacci());
    }
    let (config_text, base_dir) = if text.trim_start().starts_with('{') {
        (text.to_string(), PathBuf::new())
    } else {
        let dir = Path::new(text)
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_default();
        (read_file(text)?, dir)
    };
    let config: SystemConfig = serde_json::from_str(&config_text)
        .map_err(|e| input_error(format!("bad system config: {e}")))?;
    let canonical = match config.canonical_dfa_path() {
        Some(path) => {
            let resolved = base_dir.join(path);
            Some(load_automaton(resolved.to_str().unwrap_or(path))?)
        }
        None => None,
    };
    config
        .build(canonical)
        .map_err(|e| input_error(e.to_string()))
}

/// `up:6N`, `up:1+4N`, inline spec JSON, or a path.
pub fn load_spec(text: &str) -> Result<SetSpec, CliError> {
    if let Some(rest) = text.strip_prefix("up:") {
        let body = rest
            .strip_suffix('N')
            .ok_or_else(|| input_error(format!("progression shorthand ends in N: {text:?}")))?;
        let (r, s) = match body.split_once('+') {
            Some((r, s)) => (
                r.parse::<u64>()
                    .map_err(|_| input_error(format!("bad offset in {text:?}")))?,
                s.parse::<u64>()
                    .map_err(|_| input_error(format!("bad period in {text:?}")))?,
            ),
            None => (
                0,
                body.parse::<u64>()
                    .map_err(|_| input_error(format!("bad period in {text:?}")))?,
            ),
        };
        let spec = UpSet::progression(r, s).map_err(|e| input_error(e.to_string()))?;
        return Ok(SetSpec::UltimatelyPeriodic(spec));
    }
    let config_text = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        read_file(text)?
    };
    let config: SpecConfig = serde_json::from_str(&config_text)
        .map_err(|e| input_error(format!("bad spec: {e}")))?;
    build_spec(config)
}

fn build_spec(config: SpecConfig) -> Result<SetSpec, CliError> {
    match config {
        SpecConfig::Up {
            exceptions,
            threshold,
            period,
            residues,
        } => {
            let spec = UpSet::new(
                exceptions.include.into_iter().collect(),
                exceptions.exclude.into_iter().collect(),
                threshold,
                period,
                residues.into_iter().collect(),
            )
            .map_err(|e| input_error(e.to_string()))?;
            Ok(SetSpec::UltimatelyPeriodic(spec))
        }
        SpecConfig::Dfa { path } => Ok(SetSpec::ExplicitDfa(load_automaton(&path)?)),
        SpecConfig::Expr { alphabet, tree } => {
            let symbols = alphabet
                .into_iter()
                .map(starfree::automata::Symbol::Digit)
                .collect();
            let alphabet = starfree::automata::Alphabet::new(symbols)
                .map_err(|e| input_error(e.to_string()))?;
            let expr = tree.to_expr().map_err(|e| input_error(e.to_string()))?;
            Ok(SetSpec::StarFree { alphabet, expr })
        }
        SpecConfig::Formula { text } => Ok(SetSpec::Formula(load_num_formula(&text)?)),
    }
}

/// Automaton JSON, inline or by path.
pub fn load_automaton(text: &str) -> Result<Dfa, CliError> {
    let json = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        read_file(text)?
    };
    Dfa::from_json(&json).map_err(|e| input_error(e.to_string()))
}

/// Number-logic formula, inline or by path.
pub fn load_num_formula(text: &str) -> Result<NumFormula, CliError> {
    let source = if text.trim_start().starts_with('(') {
        text.to_string()
    } else {
        read_file(text)?
    };
    parse_num(&source).map_err(|e| input_error(e.to_string()))
}

/// Either logic, detected by the `(top …)` wrapper.
pub enum AnyFormula {
    Word(SfFormula),
    Number(NumFormula),
}

pub fn load_any_formula(text: &str) -> Result<AnyFormula, CliError> {
    let source = if text.trim_start().starts_with('(') {
        text.to_string()
    } else {
        read_file(text)?
    };
    if source.trim_start().starts_with("(top") {
        Ok(AnyFormula::Number(
            parse_num(&source).map_err(|e| input_error(e.to_string()))?,
        ))
    } else {
        Ok(AnyFormula::Word(
            parse_sf(&source).map_err(|e| input_error(e.to_string()))?,
        ))
    }
}
