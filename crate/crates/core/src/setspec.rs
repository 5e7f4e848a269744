//! Integer-set descriptions, their compilation to recognizers, and the
//! per-base star-freeness classification.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{
    Alphabet, AperiodicityReport, AutomatonError, DefinitenessReport, Dfa, Symbol, Word,
};
use crate::logic::{self, LogicError, NumFormula};
use crate::numeration::{Nat, NumerationError, NumerationSystem};

#[derive(Debug, Error)]
pub enum SetSpecError {
    #[error("ultimately periodic data is malformed: {0}")]
    MalformedSpec(String),

    #[error(transparent)]
    Numeration(#[from] NumerationError),

    #[error(transparent)]
    Automaton(#[from] AutomatonError),

    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// An ultimately periodic set: residues mod `period` beyond `threshold`,
/// with explicit membership overrides below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpSet {
    /// Members forced in below the threshold.
    #[serde(default)]
    pub include: BTreeSet<u64>,
    /// Members forced out below the threshold.
    #[serde(default)]
    pub exclude: BTreeSet<u64>,
    /// Below this bound the overrides apply.
    pub threshold: u64,
    /// Period `s ≥ 1`.
    pub period: u64,
    /// Residues in `{0, .., period-1}` that belong to the set.
    pub residues: BTreeSet<u64>,
}

impl UpSet {
    /// The progression `r + sℕ`.
    pub fn progression(r: u64, s: u64) -> Result<Self, SetSpecError> {
        UpSet::new(BTreeSet::new(), BTreeSet::new(), 0, s, BTreeSet::from([r % s]))
    }

    pub fn new(
        include: BTreeSet<u64>,
        exclude: BTreeSet<u64>,
        threshold: u64,
        period: u64,
        residues: BTreeSet<u64>,
    ) -> Result<Self, SetSpecError> {
        if period == 0 {
            return Err(SetSpecError::MalformedSpec("period must be at least 1".into()));
        }
        if let Some(&r) = residues.iter().find(|&&r| r >= period) {
            return Err(SetSpecError::MalformedSpec(format!(
                "residue {r} not below period {period}"
            )));
        }
        if let Some(&n) = include.iter().chain(exclude.iter()).find(|&&n| n >= threshold) {
            return Err(SetSpecError::MalformedSpec(format!(
                "exception {n} not below threshold {threshold}"
            )));
        }
        if include.intersection(&exclude).next().is_some() {
            return Err(SetSpecError::MalformedSpec(
                "a number cannot be both included and excluded".into(),
            ));
        }
        Ok(UpSet {
            include,
            exclude,
            threshold,
            period,
            residues,
        })
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            if self.include.contains(&n) {
                return true;
            }
            if self.exclude.contains(&n) {
                return false;
            }
        }
        self.residues.contains(&(n % self.period))
    }

    /// Smallest period presenting the same residue pattern.
    pub fn minimal_period(&self) -> u64 {
        'candidate: for d in 1..=self.period {
            if !self.period.is_multiple_of(d) {
                continue;
            }
            for r in 0..self.period {
                if self.residues.contains(&r) != self.residues.contains(&((r + d) % self.period)) {
                    continue 'candidate;
                }
            }
            return d;
        }
        self.period
    }

    /// Finite sets and complements of finite sets.
    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_cofinite(&self) -> bool {
        (0..self.period).all(|r| self.residues.contains(&r))
    }
}

/// A set of naturals, described one of four ways.
#[derive(Debug, Clone)]
pub enum SetSpec {
    UltimatelyPeriodic(UpSet),
    /// An automaton already accepting `0*ρ_U(X)`.
    ExplicitDfa(Dfa),
    /// A star-free expression over its declared digit alphabet, denoting
    /// `0*ρ_U(X)`; complements are relative to that alphabet, which must be
    /// the representation alphabet of the system the spec is compiled in.
    StarFree {
        alphabet: Alphabet,
        expr: StarFreeExpr,
    },
    /// A number-logic formula defining the set.
    Formula(NumFormula),
}

/// Expression tree with no star: finite word sets combined by boolean
/// operations and concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarFreeExpr {
    Finite(Vec<Word>),
    Union(Box<StarFreeExpr>, Box<StarFreeExpr>),
    Intersection(Box<StarFreeExpr>, Box<StarFreeExpr>),
    Complement(Box<StarFreeExpr>),
    Concat(Box<StarFreeExpr>, Box<StarFreeExpr>),
}

impl StarFreeExpr {
    pub fn finite(words: Vec<Word>) -> Self {
        StarFreeExpr::Finite(words)
    }

    pub fn union(a: StarFreeExpr, b: StarFreeExpr) -> Self {
        StarFreeExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn intersection(a: StarFreeExpr, b: StarFreeExpr) -> Self {
        StarFreeExpr::Intersection(Box::new(a), Box::new(b))
    }

    pub fn complement(a: StarFreeExpr) -> Self {
        StarFreeExpr::Complement(Box::new(a))
    }

    pub fn concat(a: StarFreeExpr, b: StarFreeExpr) -> Self {
        StarFreeExpr::Concat(Box::new(a), Box::new(b))
    }
}

/// Compile a star-free expression over the given alphabet; complements are
/// relative to `Σ*`. The result is star-free by construction.
pub fn expr_to_dfa(expr: &StarFreeExpr, alphabet: &Alphabet) -> Result<Dfa, SetSpecError> {
    Ok(match expr {
        StarFreeExpr::Finite(words) => Dfa::from_word_set(alphabet.clone(), words)?,
        StarFreeExpr::Union(a, b) => expr_to_dfa(a, alphabet)?
            .union(&expr_to_dfa(b, alphabet)?)?
            .minimized(),
        StarFreeExpr::Intersection(a, b) => expr_to_dfa(a, alphabet)?
            .intersection(&expr_to_dfa(b, alphabet)?)?
            .minimized(),
        StarFreeExpr::Complement(a) => expr_to_dfa(a, alphabet)?.complement(),
        StarFreeExpr::Concat(a, b) => expr_to_dfa(a, alphabet)?
            .concat(&expr_to_dfa(b, alphabet)?)?
            .minimized(),
    })
}

/// Build the recognizer of `0*ρ_U(X)` for an ultimately periodic set: the
/// union of residue automata, corrected by exact symmetric difference with
/// the finite set where the overrides disagree with the periodic rule.
pub fn up_to_dfa(spec: &UpSet, system: &NumerationSystem) -> Result<Dfa, SetSpecError> {
    if !system.is_greedy() {
        return Err(SetSpecError::Numeration(NumerationError::KindMismatch));
    }
    let alphabet = system.digit_alphabet();
    let mut periodic = Dfa::empty(alphabet.clone());
    for &r in &spec.residues {
        periodic = periodic.union(&system.residue_dfa(spec.period, r)?)?;
    }
    let flips: Vec<u64> = (0..spec.threshold)
        .filter(|&n| spec.contains(n) != spec.residues.contains(&(n % spec.period)))
        .collect();
    let corrected = if flips.is_empty() {
        periodic
    } else {
        let words: Vec<Word> = flips
            .iter()
            .map(|&n| system.greedy_repr(&Nat::from(n)))
            .collect::<Result<_, _>>()?;
        let finite = Dfa::from_word_set(alphabet, &words)?
            .leading_zero_closure(Symbol::Digit(0))?;
        periodic.symmetric_difference(&finite)?
    };
    Ok(corrected.minimized())
}

/// Compile any spec into the recognizer of `0*ρ_U(X)`.
pub fn spec_to_dfa(spec: &SetSpec, system: &NumerationSystem) -> Result<Dfa, SetSpecError> {
    match spec {
        SetSpec::UltimatelyPeriodic(up) => up_to_dfa(up, system),
        SetSpec::ExplicitDfa(dfa) => Ok(dfa.clone()),
        SetSpec::StarFree { alphabet, expr } => {
            if *alphabet != system.digit_alphabet() {
                return Err(SetSpecError::Automaton(AutomatonError::AlphabetMismatch));
            }
            expr_to_dfa(expr, alphabet)
        }
        SetSpec::Formula(formula) => Ok(logic::formula_language(formula, system)?),
    }
}

/// Radical of `s ≥ 2`: the product `P` of its distinct prime factors and the
/// largest exponent `α` in the factorization.
pub fn radical(s: u64) -> (u64, u32) {
    assert!(s >= 2, "radical needs s ≥ 2");
    let mut rest = s;
    let mut product = 1u64;
    let mut alpha = 0u32;
    let mut prime = 2u64;
    while prime * prime <= rest {
        if rest.is_multiple_of(prime) {
            let mut exponent = 0u32;
            while rest.is_multiple_of(prime) {
                rest /= prime;
                exponent += 1;
            }
            product *= prime;
            alpha = alpha.max(exponent);
        }
        prime += 1;
    }
    if rest > 1 {
        product *= rest;
        alpha = alpha.max(1);
    }
    (product, alpha)
}

/// Distinct prime factors of `s`.
pub fn prime_support(s: u64) -> BTreeSet<u64> {
    let mut rest = s;
    let mut out = BTreeSet::new();
    let mut prime = 2u64;
    while prime * prime <= rest {
        if rest.is_multiple_of(prime) {
            out.insert(prime);
            while rest.is_multiple_of(prime) {
                rest /= prime;
            }
        }
        prime += 1;
    }
    if rest > 1 {
        out.insert(rest);
    }
    out
}

/// Verdicts for one set in one base.
#[derive(Debug, Clone)]
pub struct StarFreeReport {
    pub recognizer: Dfa,
    pub aperiodicity: AperiodicityReport,
    pub definiteness: DefinitenessReport,
}

/// Build `0*ρ_U(X)` and run both structural tests.
pub fn star_free_in_base(
    spec: &SetSpec,
    system: &NumerationSystem,
) -> Result<StarFreeReport, SetSpecError> {
    let recognizer = spec_to_dfa(spec, system)?;
    let aperiodicity = recognizer.is_aperiodic()?;
    let definiteness = recognizer.is_definite();
    Ok(StarFreeReport {
        recognizer,
        aperiodicity,
        definiteness,
    })
}

/// One probed base with its verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct BaseEvidence {
    pub base: u32,
    pub aperiodic: bool,
    pub definite: bool,
    /// Witness word of a nontrivial permutation, when not aperiodic.
    pub witness: Option<String>,
}

/// The four-way classification.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Category {
    /// Finite or cofinite: star-free in every base.
    FiniteOrCofinite { evidence: Vec<BaseEvidence> },
    /// Ultimately periodic with a nontrivial minimal period `s`: star-free
    /// exactly in bases built on the radical `P` of `s`.
    UltimatelyPeriodic {
        minimal_period: u64,
        radical: u64,
        alpha: u32,
        evidence: Vec<BaseEvidence>,
    },
    /// Star-free in at least one probed base; not ultimately periodic as far
    /// as sampling sees. Evidence only — no universal claim.
    StarFreeSomewhere {
        evidence: Vec<BaseEvidence>,
        non_exhaustive: bool,
    },
    /// Not star-free in any probed base. Evidence only — no universal claim.
    NoStarFreeBaseFound {
        evidence: Vec<BaseEvidence>,
        non_exhaustive: bool,
    },
}

/// Default probe bases: `2..=12` plus `i·P` for `i ∈ {1, 2}` when a radical
/// is available.
pub fn default_probes(radical: Option<u64>) -> Vec<u32> {
    let mut probes: BTreeSet<u32> = (2..=12).collect();
    if let Some(p) = radical {
        for i in [1u64, 2] {
            if let Some(base) = (i * p).to_u32() {
                if base >= 2 {
                    probes.insert(base);
                }
            }
        }
    }
    probes.into_iter().collect()
}

fn probe_base(spec: &SetSpec, base: u32) -> Result<BaseEvidence, SetSpecError> {
    let system = NumerationSystem::base(base)?;
    let report = star_free_in_base(spec, &system)?;
    Ok(BaseEvidence {
        base,
        aperiodic: report.aperiodicity.aperiodic,
        definite: report.definiteness.definite,
        witness: report
            .aperiodicity
            .witness
            .as_ref()
            .map(|w| w.word.to_string()),
    })
}

/// Classify a set into the four categories, probing the given bases.
///
/// Ultimately periodic data is classified exactly; other specs only to the
/// extent the probes show, and the report says so.
pub fn classify(spec: &SetSpec, probes: &[u32]) -> Result<Category, SetSpecError> {
    match spec {
        SetSpec::UltimatelyPeriodic(up) => {
            let minimal = up.minimal_period();
            if minimal == 1 || up.is_finite() || up.is_cofinite() {
                let evidence = probes
                    .iter()
                    .map(|&base| probe_base(spec, base))
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Category::FiniteOrCofinite { evidence });
            }
            let (p, alpha) = radical(minimal);
            let mut bases: Vec<u32> = probes.to_vec();
            for i in [1u64, 2] {
                if let Some(base) = (i * p).to_u32() {
                    if base >= 2 && !bases.contains(&base) {
                        bases.push(base);
                    }
                }
            }
            bases.sort_unstable();
            let evidence = bases
                .iter()
                .map(|&base| probe_base(spec, base))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Category::UltimatelyPeriodic {
                minimal_period: minimal,
                radical: p,
                alpha,
                evidence,
            })
        }
        _ => {
            let evidence = probes
                .iter()
                .map(|&base| probe_base(spec, base))
                .collect::<Result<Vec<_>, _>>()?;
            let somewhere = evidence.iter().any(|e| e.aperiodic);
            Ok(if somewhere {
                Category::StarFreeSomewhere {
                    evidence,
                    non_exhaustive: true,
                }
            } else {
                Category::NoStarFreeBaseFound {
                    evidence,
                    non_exhaustive: true,
                }
            })
        }
    }
}

/// Serializable spec description mirroring the CLI input format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpecConfig {
    Up {
        #[serde(default)]
        exceptions: Exceptions,
        #[serde(default)]
        threshold: u64,
        period: u64,
        residues: Vec<u64>,
    },
    Dfa {
        path: String,
    },
    Expr {
        alphabet: Vec<u32>,
        tree: ExprConfig,
    },
    Formula {
        text: String,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Exceptions {
    #[serde(default)]
    pub include: Vec<u64>,
    #[serde(default)]
    pub exclude: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ExprConfig {
    Finite { words: Vec<String> },
    Union { args: Vec<ExprConfig> },
    Intersection { args: Vec<ExprConfig> },
    Complement { arg: Box<ExprConfig> },
    Concat { args: Vec<ExprConfig> },
}

impl ExprConfig {
    pub fn to_expr(&self) -> Result<StarFreeExpr, SetSpecError> {
        fn fold(
            args: &[ExprConfig],
            join: fn(StarFreeExpr, StarFreeExpr) -> StarFreeExpr,
        ) -> Result<StarFreeExpr, SetSpecError> {
            let mut parts = args.iter().map(|a| a.to_expr());
            let Some(first) = parts.next() else {
                return Err(SetSpecError::MalformedSpec(
                    "expression operators need at least one argument".into(),
                ));
            };
            parts.try_fold(first?, |acc, part| Ok(join(acc, part?)))
        }
        match self {
            ExprConfig::Finite { words } => {
                let words = words
                    .iter()
                    .map(|text| {
                        Word::parse_digits(text).map_err(|e| {
                            SetSpecError::MalformedSpec(format!("bad word {text:?}: {e}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(StarFreeExpr::Finite(words))
            }
            ExprConfig::Union { args } => fold(args, StarFreeExpr::union),
            ExprConfig::Intersection { args } => fold(args, StarFreeExpr::intersection),
            ExprConfig::Complement { arg } => Ok(StarFreeExpr::complement(arg.to_expr()?)),
            ExprConfig::Concat { args } => fold(args, StarFreeExpr::concat),
        }
    }
}
