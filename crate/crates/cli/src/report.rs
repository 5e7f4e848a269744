//! Report assembly: deterministic JSON given identical inputs, modulo the
//! timing field, with witnesses that re-validate on load.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use starfree::automata::{dfa_to_dot, AperiodicityReport, DefinitenessReport, Dfa, Word};

use crate::inputs::input_error;
use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub targets: Vec<Target>,
    /// Wall-clock milliseconds; the only nondeterministic field.
    pub elapsed_ms: u128,
}

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct Target {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperiodic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperiodicity_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monoid_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definite: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub word: String,
    pub cycle: Vec<usize>,
    /// Path of the automaton JSON whose minimal form the cycle refers to.
    pub automaton: Option<String>,
}

impl Target {
    pub fn named(name: impl Into<String>) -> Self {
        Target {
            name: name.into(),
            ..Target::default()
        }
    }

    pub fn with_verdicts(
        mut self,
        dfa: &Dfa,
        aperiodicity: &AperiodicityReport,
        definiteness: &DefinitenessReport,
        artifact: Option<&str>,
    ) -> Self {
        self.states = Some(dfa.minimized().state_count());
        self.aperiodic = Some(aperiodicity.aperiodic);
        self.aperiodicity_index = aperiodicity.index;
        self.monoid_size = Some(aperiodicity.monoid_size);
        self.witness = aperiodicity.witness.as_ref().map(|w| WitnessJson {
            word: w.word.to_string(),
            cycle: w.cycle.clone(),
            automaton: artifact.map(str::to_string),
        });
        self.definite = Some(definiteness.definite);
        self.horizon = definiteness.horizon;
        self
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            targets: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Load a report and re-validate every witness against its referenced
    /// automaton artifact.
    pub fn load(path: &str) -> Result<Report, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| input_error(format!("cannot read {path}: {e}")))?;
        let report: Report = serde_json::from_str(&text)
            .map_err(|e| input_error(format!("bad report: {e}")))?;
        let base = Path::new(path).parent().map(Path::to_path_buf).unwrap_or_default();
        for target in &report.targets {
            let Some(witness) = &target.witness else {
                continue;
            };
            let Some(automaton_path) = &witness.automaton else {
                continue;
            };
            let resolved = base.join(automaton_path);
            let resolved = resolved.to_str().unwrap_or(automaton_path);
            let dfa = crate::inputs::load_automaton(resolved)?;
            let word = Word::parse_digits(&witness.word)
                .map_err(|e| input_error(format!("bad witness word: {e}")))?;
            let rebuilt = starfree::automata::PermutationWitness {
                word,
                cycle: witness.cycle.clone(),
            };
            if !rebuilt.validate(&dfa.minimized()) {
                return Err(CliError::VerdictMismatch(format!(
                    "witness for target {:?} does not re-validate",
                    target.name
                )));
            }
        }
        Ok(report)
    }
}

/// Artifact sink: which formats to write and where.
pub struct Emitter {
    pub out_dir: PathBuf,
    pub json: bool,
    pub dot: bool,
}

impl Emitter {
    pub fn new(out_dir: Option<String>, emit: Option<&str>) -> Result<Self, CliError> {
        let out_dir = out_dir
            .or_else(|| std::env::var("STARFREE_OUT_DIR").ok())
            .unwrap_or_else(|| ".".to_string());
        let mut json = false;
        let mut dot = false;
        if let Some(emit) = emit {
            for format in emit.split(',') {
                match format.trim() {
                    "json" => json = true,
                    "dot" => dot = true,
                    other => {
                        return Err(input_error(format!(
                            "unknown artifact format {other:?} (expected json or dot)"
                        )))
                    }
                }
            }
        }
        Ok(Emitter {
            out_dir: PathBuf::from(out_dir),
            json,
            dot,
        })
    }

    /// Write the requested artifacts; returns their paths.
    pub fn write(&self, name: &str, dfa: &Dfa) -> Result<Vec<String>, CliError> {
        let mut written = Vec::new();
        if self.json || self.dot {
            fs::create_dir_all(&self.out_dir)
                .map_err(|e| input_error(format!("cannot create {:?}: {e}", self.out_dir)))?;
        }
        if self.json {
            let path = self.out_dir.join(format!("{name}.json"));
            fs::write(&path, dfa.to_json())
                .map_err(|e| input_error(format!("cannot write {path:?}: {e}")))?;
            written.push(path.to_string_lossy().into_owned());
        }
        if self.dot {
            let path = self.out_dir.join(format!("{name}.dot"));
            fs::write(&path, dfa_to_dot(dfa, name))
                .map_err(|e| input_error(format!("cannot write {path:?}: {e}")))?;
            written.push(path.to_string_lossy().into_owned());
        }
        Ok(written)
    }
}
