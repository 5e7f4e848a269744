//! The two logical languages and their bridge.
//!
//! [`SfFormula`] is first-order logic on word models: positions ordered by
//! `<`, letter predicates `P_a`, and the constant `max`, positions counted
//! from the right starting at 1. Sentences define exactly the star-free
//! languages; [`compile_sf`] realizes that direction as a compiler and the
//! aperiodicity check certifies it on every compiled instance.
//!
//! [`NumFormula`] is the bounded-quantifier number logic: a single free
//! variable `n`, atoms `ε_{j,U}(n, x)` reading the greedy digits of `n`, and
//! quantifiers relativized to basis elements below the top-level bound `b`.
//! [`num_to_sf`] and [`sf_to_num`] are the two syntactic translations linking
//! the languages; they preserve the defined sets.

mod compile;
mod eval;
mod parse;
mod translate;

pub mod catalog;

pub use compile::compile_sf;
pub use eval::{eval_num, eval_sf, word_model, Valuation, WordModel};
pub use parse::{parse_num, parse_sf, print_num, print_sf};
pub use translate::{
    accepted_values, canonical_sentence, default_slack, define_set, formula_language,
    inject_canonical, num_to_sf, sf_to_num,
};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automata::AutomatonError;
use crate::numeration::NumerationError;

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },

    #[error("formula has free variables: {0:?}")]
    NotASentence(Vec<String>),

    #[error("variable {0} is not bound")]
    UnboundVariable(String),

    #[error("word models are defined for nonempty words only")]
    EmptyWord,

    #[error("word models need digit letters")]
    NotADigitWord,

    #[error("malformed number-logic formula: {0}")]
    ShapeViolation(String),

    #[error("canonical-form language of this system is not aperiodic")]
    CanonicalNotAperiodic,

    #[error("no canonical-form sentence is built in for this system")]
    CanonicalSentenceUnavailable,

    #[error(transparent)]
    Numeration(#[from] NumerationError),

    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Term of the word logic: a position variable or the constant `max`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SfTerm {
    Var(String),
    Max,
}

impl SfTerm {
    pub fn var(name: &str) -> Self {
        SfTerm::Var(name.to_string())
    }
}

/// Formula of the first-order logic on word models.
///
/// The derived connectives are first-class nodes; they evaluate and compile
/// through their standard expansions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SfFormula {
    Less(SfTerm, SfTerm),
    Equal(SfTerm, SfTerm),
    /// `P_a(τ)`: position `τ` carries letter `a ≥ 1`.
    Letter(u32, SfTerm),
    Not(Box<SfFormula>),
    And(Box<SfFormula>, Box<SfFormula>),
    Or(Box<SfFormula>, Box<SfFormula>),
    Implies(Box<SfFormula>, Box<SfFormula>),
    Iff(Box<SfFormula>, Box<SfFormula>),
    Exists(String, Box<SfFormula>),
    Forall(String, Box<SfFormula>),
}

impl SfFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: SfFormula) -> Self {
        SfFormula::Not(Box::new(f))
    }

    pub fn and(a: SfFormula, b: SfFormula) -> Self {
        SfFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: SfFormula, b: SfFormula) -> Self {
        SfFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: SfFormula, b: SfFormula) -> Self {
        SfFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: SfFormula, b: SfFormula) -> Self {
        SfFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: SfFormula) -> Self {
        SfFormula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: SfFormula) -> Self {
        SfFormula::Forall(x.to_string(), Box::new(f))
    }

    /// Free variables, in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn term(t: &SfTerm, bound: &BTreeSet<String>, out: &mut BTreeSet<String>) {
            if let SfTerm::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        fn walk(f: &SfFormula, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
            match f {
                SfFormula::Less(a, b) | SfFormula::Equal(a, b) => {
                    term(a, bound, out);
                    term(b, bound, out);
                }
                SfFormula::Letter(_, t) => term(t, bound, out),
                SfFormula::Not(inner) => walk(inner, bound, out),
                SfFormula::And(a, b)
                | SfFormula::Or(a, b)
                | SfFormula::Implies(a, b)
                | SfFormula::Iff(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                SfFormula::Exists(x, inner) | SfFormula::Forall(x, inner) => {
                    let fresh = bound.insert(x.clone());
                    walk(inner, bound, out);
                    if fresh {
                        bound.remove(x);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut BTreeSet::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }
}

/// Main part `𝔓` of a number-logic formula; `b` is the implicit bound and
/// `n` the implicit free variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NumBody {
    Less(String, String),
    Equal(String, String),
    /// `ε_{j,U}(n, x)`: the basis element `x` carries digit `j` in the greedy
    /// decomposition of `n`.
    Eps(u32, String),
    Not(Box<NumBody>),
    And(Box<NumBody>, Box<NumBody>),
    Or(Box<NumBody>, Box<NumBody>),
    Implies(Box<NumBody>, Box<NumBody>),
    Iff(Box<NumBody>, Box<NumBody>),
    /// `(∃x)_U^{<b} φ`: some basis element below `b` satisfies `φ`.
    ExistsBounded(String, Box<NumBody>),
    /// `(∀x)_U^{<b} φ`, read as relativized implication.
    ForallBounded(String, Box<NumBody>),
}

impl NumBody {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: NumBody) -> Self {
        NumBody::Not(Box::new(f))
    }

    pub fn and(a: NumBody, b: NumBody) -> Self {
        NumBody::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: NumBody, b: NumBody) -> Self {
        NumBody::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: NumBody, b: NumBody) -> Self {
        NumBody::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: NumBody, b: NumBody) -> Self {
        NumBody::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: NumBody) -> Self {
        NumBody::ExistsBounded(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: NumBody) -> Self {
        NumBody::ForallBounded(x.to_string(), Box::new(f))
    }

    fn bound_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            NumBody::Less(..) | NumBody::Equal(..) | NumBody::Eps(..) => {}
            NumBody::Not(inner) => inner.bound_vars(out),
            NumBody::And(a, b)
            | NumBody::Or(a, b)
            | NumBody::Implies(a, b)
            | NumBody::Iff(a, b) => {
                a.bound_vars(out);
                b.bound_vars(out);
            }
            NumBody::ExistsBounded(x, inner) | NumBody::ForallBounded(x, inner) => {
                out.insert(x.clone());
                inner.bound_vars(out);
            }
        }
    }
}

/// A formula of the number logic: `(∃b)(ε_{1,U}(b, b) ∧ main)`, with `n` as
/// its only free variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumFormula {
    pub main: NumBody,
}

impl NumFormula {
    /// Wrap a main part, checking the shape rules: every order or digit atom
    /// uses variables introduced by a bounded quantifier, and the reserved
    /// names `n` and `b` never appear as ordinary variables.
    pub fn new(main: NumBody) -> Result<Self, LogicError> {
        fn check(body: &NumBody, scope: &mut Vec<String>) -> Result<(), LogicError> {
            let reserved = |v: &str| v == "n" || v == "b";
            let bound = |v: &String, scope: &Vec<String>| scope.contains(v);
            match body {
                NumBody::Less(a, b) | NumBody::Equal(a, b) => {
                    for v in [a, b] {
                        if reserved(v) {
                            return Err(LogicError::ShapeViolation(format!(
                                "{v} cannot be an order operand"
                            )));
                        }
                        if !bound(v, scope) {
                            return Err(LogicError::ShapeViolation(format!(
                                "variable {v} is not bound by a bounded quantifier"
                            )));
                        }
                    }
                    Ok(())
                }
                NumBody::Eps(j, x) => {
                    if *j == 0 {
                        return Err(LogicError::ShapeViolation(
                            "digit coefficient must be at least 1".into(),
                        ));
                    }
                    if reserved(x) {
                        return Err(LogicError::ShapeViolation(format!(
                            "{x} cannot be a digit-atom operand"
                        )));
                    }
                    if !bound(x, scope) {
                        return Err(LogicError::ShapeViolation(format!(
                            "variable {x} is not bound by a bounded quantifier"
                        )));
                    }
                    Ok(())
                }
                NumBody::Not(inner) => check(inner, scope),
                NumBody::And(a, b)
                | NumBody::Or(a, b)
                | NumBody::Implies(a, b)
                | NumBody::Iff(a, b) => {
                    check(a, scope)?;
                    check(b, scope)
                }
                NumBody::ExistsBounded(x, inner) | NumBody::ForallBounded(x, inner) => {
                    if reserved(x) {
                        return Err(LogicError::ShapeViolation(format!(
                            "{x} cannot be re-bound"
                        )));
                    }
                    scope.push(x.clone());
                    let result = check(inner, scope);
                    scope.pop();
                    result
                }
            }
        }
        check(&main, &mut Vec::new())?;
        Ok(NumFormula { main })
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.main.bound_vars(&mut out);
        out
    }
}
