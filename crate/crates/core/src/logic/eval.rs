//! Satisfaction of word-logic formulas on word models, and of number-logic
//! formulas on naturals.

use std::collections::HashMap;

use num_traits::Zero;

use crate::automata::Word;
use crate::numeration::{Nat, NumerationError, NumerationSystem};

use super::{LogicError, NumBody, NumFormula, SfFormula, SfTerm};

/// Finite model of a nonempty word: positions `1..=max` counted from the
/// right, and for each letter the set of positions carrying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordModel {
    /// `letters[i]` is the letter at position `i + 1`.
    letters: Vec<u32>,
}

impl WordModel {
    pub fn max(&self) -> usize {
        self.letters.len()
    }

    /// Letter at a 1-based position.
    pub fn letter_at(&self, position: usize) -> u32 {
        self.letters[position - 1]
    }

    /// `P_a`: positions carrying letter `a`.
    pub fn positions_of(&self, a: u32) -> Vec<usize> {
        (1..=self.max()).filter(|&i| self.letter_at(i) == a).collect()
    }
}

/// Build the model of a nonempty digit word; position 1 is the rightmost
/// letter.
pub fn word_model(word: &Word) -> Result<WordModel, LogicError> {
    if word.is_empty() {
        return Err(LogicError::EmptyWord);
    }
    let mut letters = word.digits().ok_or(LogicError::NotADigitWord)?;
    letters.reverse();
    Ok(WordModel { letters })
}

/// Assignment of positions to the free variables under interpretation.
#[derive(Debug, Clone, Default)]
pub struct Valuation {
    map: HashMap<String, usize>,
}

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn bind(mut self, var: &str, position: usize) -> Self {
        self.map.insert(var.to_string(), position);
        self
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.map.get(var).copied()
    }
}

/// Standard first-order satisfaction over a word model.
pub fn eval_sf(
    formula: &SfFormula,
    model: &WordModel,
    valuation: &Valuation,
) -> Result<bool, LogicError> {
    let mut scope = valuation.map.clone();
    eval_sf_scoped(formula, model, &mut scope)
}

fn eval_sf_scoped(
    formula: &SfFormula,
    model: &WordModel,
    scope: &mut HashMap<String, usize>,
) -> Result<bool, LogicError> {
    let term = |t: &SfTerm, scope: &HashMap<String, usize>| -> Result<usize, LogicError> {
        match t {
            SfTerm::Max => Ok(model.max()),
            SfTerm::Var(v) => scope
                .get(v)
                .copied()
                .ok_or_else(|| LogicError::UnboundVariable(v.clone())),
        }
    };
    Ok(match formula {
        SfFormula::Less(a, b) => term(a, scope)? < term(b, scope)?,
        SfFormula::Equal(a, b) => term(a, scope)? == term(b, scope)?,
        SfFormula::Letter(a, t) => model.letter_at(term(t, scope)?) == *a,
        SfFormula::Not(inner) => !eval_sf_scoped(inner, model, scope)?,
        SfFormula::And(x, y) => {
            eval_sf_scoped(x, model, scope)? && eval_sf_scoped(y, model, scope)?
        }
        SfFormula::Or(x, y) => {
            eval_sf_scoped(x, model, scope)? || eval_sf_scoped(y, model, scope)?
        }
        SfFormula::Implies(x, y) => {
            !eval_sf_scoped(x, model, scope)? || eval_sf_scoped(y, model, scope)?
        }
        SfFormula::Iff(x, y) => {
            eval_sf_scoped(x, model, scope)? == eval_sf_scoped(y, model, scope)?
        }
        SfFormula::Exists(x, inner) => {
            let saved = scope.get(x).copied();
            let mut hit = false;
            for position in 1..=model.max() {
                scope.insert(x.clone(), position);
                if eval_sf_scoped(inner, model, scope)? {
                    hit = true;
                    break;
                }
            }
            restore(scope, x, saved);
            hit
        }
        SfFormula::Forall(x, inner) => {
            let saved = scope.get(x).copied();
            let mut all = true;
            for position in 1..=model.max() {
                scope.insert(x.clone(), position);
                if !eval_sf_scoped(inner, model, scope)? {
                    all = false;
                    break;
                }
            }
            restore(scope, x, saved);
            all
        }
    })
}

fn restore(scope: &mut HashMap<String, usize>, var: &str, saved: Option<usize>) {
    match saved {
        Some(v) => {
            scope.insert(var.to_string(), v);
        }
        None => {
            scope.remove(var);
        }
    }
}

/// Evaluate a number-logic formula at `n`.
///
/// The existential bound `b` ranges over the basis elements `U_m` for
/// `m ∈ [ℓ, ℓ + slack]` where `ℓ = |ρ_U(n)|` (`ℓ = 1` for `n = 0`); bounded
/// quantifiers then range over basis elements below `b`. Membership is
/// insensitive to the exact slack once it exceeds the aperiodicity index of
/// the compiled word language; [`super::default_slack`] picks a sufficient
/// value.
pub fn eval_num(
    formula: &NumFormula,
    n: &Nat,
    system: &NumerationSystem,
    slack: usize,
) -> Result<bool, LogicError> {
    if !system.is_greedy() {
        return Err(LogicError::Numeration(NumerationError::KindMismatch));
    }
    let repr_len = if n.is_zero() {
        1
    } else {
        system.greedy_repr(n)?.len()
    };
    for m in repr_len..=repr_len + slack {
        // bounded variables range over U_0 .. U_{m-1}
        system.ensure_basis(m + 1)?;
        let window: Vec<Nat> = (0..m)
            .map(|i| system.basis(i))
            .collect::<Result<_, _>>()?;
        let mut scope = HashMap::new();
        if eval_body(&formula.main, n, system, &window, &mut scope)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn eval_body(
    body: &NumBody,
    n: &Nat,
    system: &NumerationSystem,
    window: &[Nat],
    scope: &mut HashMap<String, Nat>,
) -> Result<bool, LogicError> {
    let lookup = |v: &String, scope: &HashMap<String, Nat>| -> Result<Nat, LogicError> {
        scope
            .get(v)
            .cloned()
            .ok_or_else(|| LogicError::UnboundVariable(v.clone()))
    };
    Ok(match body {
        NumBody::Less(a, b) => lookup(a, scope)? < lookup(b, scope)?,
        NumBody::Equal(a, b) => lookup(a, scope)? == lookup(b, scope)?,
        NumBody::Eps(j, x) => {
            let y = lookup(x, scope)?;
            system.epsilon(n, &y, *j)?
        }
        NumBody::Not(inner) => !eval_body(inner, n, system, window, scope)?,
        NumBody::And(x, y) => {
            eval_body(x, n, system, window, scope)? && eval_body(y, n, system, window, scope)?
        }
        NumBody::Or(x, y) => {
            eval_body(x, n, system, window, scope)? || eval_body(y, n, system, window, scope)?
        }
        NumBody::Implies(x, y) => {
            !eval_body(x, n, system, window, scope)? || eval_body(y, n, system, window, scope)?
        }
        NumBody::Iff(x, y) => {
            eval_body(x, n, system, window, scope)? == eval_body(y, n, system, window, scope)?
        }
        NumBody::ExistsBounded(x, inner) => {
            let saved = scope.get(x).cloned();
            let mut hit = false;
            for value in window {
                scope.insert(x.clone(), value.clone());
                if eval_body(inner, n, system, window, scope)? {
                    hit = true;
                    break;
                }
            }
            restore_nat(scope, x, saved);
            hit
        }
        NumBody::ForallBounded(x, inner) => {
            let saved = scope.get(x).cloned();
            let mut all = true;
            for value in window {
                scope.insert(x.clone(), value.clone());
                if !eval_body(inner, n, system, window, scope)? {
                    all = false;
                    break;
                }
            }
            restore_nat(scope, x, saved);
            all
        }
    })
}

fn restore_nat(scope: &mut HashMap<String, Nat>, var: &str, saved: Option<Nat>) {
    match saved {
        Some(v) => {
            scope.insert(var.to_string(), v);
        }
        None => {
            scope.remove(var);
        }
    }
}
