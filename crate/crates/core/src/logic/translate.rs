//! The syntactic translations between the word logic and the number logic,
//! the canonical-form sentences, and set definition.

use crate::automata::{Dfa, Symbol};
use crate::numeration::{Nat, NumerationSystem, SystemKind};

use super::{LogicError, NumBody, NumFormula, SfFormula, SfTerm};

/// Translate a number-logic formula into a word-logic sentence: drop the
/// `(∃b)` shell, replace each digit atom `ε_{j,U}(n, x)` by `P_j(x)` and each
/// bounded quantifier by its plain form. Position `x` stands for `1 + i`
/// where `U_i` is the basis element assigned to `x`.
pub fn num_to_sf(formula: &NumFormula) -> SfFormula {
    body_to_sf(&formula.main)
}

fn body_to_sf(body: &NumBody) -> SfFormula {
    match body {
        NumBody::Less(a, b) => SfFormula::Less(SfTerm::Var(a.clone()), SfTerm::Var(b.clone())),
        NumBody::Equal(a, b) => SfFormula::Equal(SfTerm::Var(a.clone()), SfTerm::Var(b.clone())),
        NumBody::Eps(j, x) => SfFormula::Letter(*j, SfTerm::Var(x.clone())),
        NumBody::Not(inner) => SfFormula::not(body_to_sf(inner)),
        NumBody::And(a, b) => SfFormula::and(body_to_sf(a), body_to_sf(b)),
        NumBody::Or(a, b) => SfFormula::or(body_to_sf(a), body_to_sf(b)),
        NumBody::Implies(a, b) => SfFormula::implies(body_to_sf(a), body_to_sf(b)),
        NumBody::Iff(a, b) => SfFormula::iff(body_to_sf(a), body_to_sf(b)),
        NumBody::ExistsBounded(x, inner) => {
            SfFormula::Exists(x.clone(), Box::new(body_to_sf(inner)))
        }
        NumBody::ForallBounded(x, inner) => {
            SfFormula::Forall(x.clone(), Box::new(body_to_sf(inner)))
        }
    }
}

/// Translate a word-logic sentence into the number logic: quantifiers become
/// bounded, `P_j(x)` becomes `ε_{j,U}(n, x)`, and the whole thing is wrapped
/// as `(∃b)(ε_{1,U}(b, b) ∧ …)`. The constant `max` — the top position —
/// translates through a fresh variable constrained to be the largest basis
/// element below `b`.
pub fn sf_to_num(formula: &SfFormula, _system: &NumerationSystem) -> Result<NumFormula, LogicError> {
    let free = formula.free_vars();
    if !free.is_empty() {
        return Err(LogicError::NotASentence(free.into_iter().collect()));
    }
    let mut fresh = 0usize;
    let body = sf_body_to_num(formula, &mut fresh)?;
    NumFormula::new(body)
}

fn largest_below_bound(var: &str, fresh: &mut usize) -> NumBody {
    *fresh += 1;
    let probe = format!("above_{fresh}");
    NumBody::not(NumBody::ExistsBounded(
        probe.clone(),
        Box::new(NumBody::Less(var.to_string(), probe)),
    ))
}

fn num_term(
    term: &SfTerm,
    fresh: &mut usize,
    wrappers: &mut Vec<(String, NumBody)>,
) -> String {
    match term {
        SfTerm::Var(v) => v.clone(),
        SfTerm::Max => {
            *fresh += 1;
            let marker = format!("top_{fresh}");
            let constraint = largest_below_bound(&marker, fresh);
            wrappers.push((marker.clone(), constraint));
            marker
        }
    }
}

fn wrap_atom(atom: NumBody, wrappers: Vec<(String, NumBody)>) -> NumBody {
    wrappers.into_iter().rev().fold(atom, |acc, (marker, constraint)| {
        NumBody::ExistsBounded(marker, Box::new(NumBody::and(constraint, acc)))
    })
}

fn sf_body_to_num(formula: &SfFormula, fresh: &mut usize) -> Result<NumBody, LogicError> {
    Ok(match formula {
        SfFormula::Less(a, b) => {
            let mut wrappers = Vec::new();
            let a = num_term(a, fresh, &mut wrappers);
            let b = num_term(b, fresh, &mut wrappers);
            wrap_atom(NumBody::Less(a, b), wrappers)
        }
        SfFormula::Equal(a, b) => {
            let mut wrappers = Vec::new();
            let a = num_term(a, fresh, &mut wrappers);
            let b = num_term(b, fresh, &mut wrappers);
            wrap_atom(NumBody::Equal(a, b), wrappers)
        }
        SfFormula::Letter(j, t) => {
            let mut wrappers = Vec::new();
            let x = num_term(t, fresh, &mut wrappers);
            wrap_atom(NumBody::Eps(*j, x), wrappers)
        }
        SfFormula::Not(inner) => NumBody::not(sf_body_to_num(inner, fresh)?),
        SfFormula::And(a, b) => {
            NumBody::and(sf_body_to_num(a, fresh)?, sf_body_to_num(b, fresh)?)
        }
        SfFormula::Or(a, b) => NumBody::or(sf_body_to_num(a, fresh)?, sf_body_to_num(b, fresh)?),
        SfFormula::Implies(a, b) => {
            NumBody::implies(sf_body_to_num(a, fresh)?, sf_body_to_num(b, fresh)?)
        }
        SfFormula::Iff(a, b) => {
            NumBody::iff(sf_body_to_num(a, fresh)?, sf_body_to_num(b, fresh)?)
        }
        SfFormula::Exists(x, inner) => {
            NumBody::ExistsBounded(x.clone(), Box::new(sf_body_to_num(inner, fresh)?))
        }
        SfFormula::Forall(x, inner) => {
            NumBody::ForallBounded(x.clone(), Box::new(sf_body_to_num(inner, fresh)?))
        }
    })
}

/// The sentence `𝔛` defining the canonical forms `𝒩_U` on nonempty words.
///
/// For a positional base every word is canonical, so `𝔛` is a tautology. For
/// the Fibonacci system the canonical words avoid the factor `11`: no two
/// positions in order, with nothing strictly between them, may both carry 1.
pub fn canonical_sentence(system: &NumerationSystem) -> Result<SfFormula, LogicError> {
    match system.kind() {
        SystemKind::PositionalBase(_) => Ok(SfFormula::forall(
            "x",
            SfFormula::Equal(SfTerm::var("x"), SfTerm::var("x")),
        )),
        SystemKind::LinearRecurrence { coeffs, initial }
            if coeffs == &[1, 1] && initial == &[1, 2] =>
        {
            let (x, y, z) = (SfTerm::var("x"), SfTerm::var("y"), SfTerm::var("z"));
            Ok(SfFormula::forall(
                "x",
                SfFormula::forall(
                    "y",
                    SfFormula::or(
                        SfFormula::not(SfFormula::Less(x.clone(), y.clone())),
                        SfFormula::or(
                            SfFormula::exists(
                                "z",
                                SfFormula::and(
                                    SfFormula::Less(x.clone(), z.clone()),
                                    SfFormula::Less(z, y.clone()),
                                ),
                            ),
                            SfFormula::not(SfFormula::and(
                                SfFormula::Letter(1, x),
                                SfFormula::Letter(1, y),
                            )),
                        ),
                    ),
                ),
            ))
        }
        SystemKind::LinearRecurrence { .. } => Err(LogicError::CanonicalSentenceUnavailable),
        SystemKind::BijectiveBase(_) => Err(LogicError::CanonicalSentenceUnavailable),
    }
}

/// Conjoin the canonical-form condition into a number-logic formula:
/// `(∃b)(ε_{1,U}(b,b) ∧ 𝔓(ψ) ∧ 𝔛_ℕ)`, renaming so the two parts share only
/// `n` and `b`.
pub fn inject_canonical(
    formula: &NumFormula,
    system: &NumerationSystem,
) -> Result<NumFormula, LogicError> {
    let canonical = system.canonical_dfa()?;
    if !canonical.is_aperiodic()?.aperiodic {
        return Err(LogicError::CanonicalNotAperiodic);
    }
    let sentence = canonical_sentence(system)?;
    let mut fresh = 0usize;
    let mut canonical_body = sf_body_to_num(&sentence, &mut fresh)?;
    let taken = formula.bound_vars();
    for var in collect_bound(&canonical_body) {
        if taken.contains(&var) {
            let renamed = format!("{var}_c");
            debug_assert!(!taken.contains(&renamed));
            canonical_body = rename_bound(canonical_body, &var, &renamed);
        }
    }
    NumFormula::new(NumBody::and(formula.main.clone(), canonical_body))
}

fn collect_bound(body: &NumBody) -> Vec<String> {
    let mut out = std::collections::BTreeSet::new();
    body.bound_vars(&mut out);
    out.into_iter().collect()
}

fn rename_bound(body: NumBody, from: &str, to: &str) -> NumBody {
    let var = |v: String| if v == from { to.to_string() } else { v };
    match body {
        NumBody::Less(a, b) => NumBody::Less(var(a), var(b)),
        NumBody::Equal(a, b) => NumBody::Equal(var(a), var(b)),
        NumBody::Eps(j, x) => NumBody::Eps(j, var(x)),
        NumBody::Not(inner) => NumBody::not(rename_bound(*inner, from, to)),
        NumBody::And(a, b) => {
            NumBody::and(rename_bound(*a, from, to), rename_bound(*b, from, to))
        }
        NumBody::Or(a, b) => NumBody::or(rename_bound(*a, from, to), rename_bound(*b, from, to)),
        NumBody::Implies(a, b) => {
            NumBody::implies(rename_bound(*a, from, to), rename_bound(*b, from, to))
        }
        NumBody::Iff(a, b) => {
            NumBody::iff(rename_bound(*a, from, to), rename_bound(*b, from, to))
        }
        NumBody::ExistsBounded(x, inner) => {
            NumBody::ExistsBounded(var(x), Box::new(rename_bound(*inner, from, to)))
        }
        NumBody::ForallBounded(x, inner) => {
            NumBody::ForallBounded(var(x), Box::new(rename_bound(*inner, from, to)))
        }
    }
}

/// Slack sufficient for the bound search in [`super::eval_num`]: one beyond
/// the state count of the compiled word language, which dominates its
/// aperiodicity index, so zero-padding membership has stabilized within the
/// window.
pub fn default_slack(
    formula: &NumFormula,
    system: &NumerationSystem,
) -> Result<usize, LogicError> {
    let compiled = super::compile_sf(&num_to_sf(formula), &system.digit_alphabet())?;
    Ok(compiled.state_count() + 1)
}

/// All `n ≤ horizon` satisfying the formula, in increasing order.
pub fn define_set(
    formula: &NumFormula,
    system: &NumerationSystem,
    horizon: u64,
    slack: Option<usize>,
) -> Result<Vec<Nat>, LogicError> {
    let slack = match slack {
        Some(s) => s,
        None => default_slack(formula, system)?,
    };
    let mut hits = Vec::new();
    for n in 0..=horizon {
        let n = Nat::from(n);
        if super::eval_num(formula, &n, system, slack)? {
            hits.push(n);
        }
    }
    Ok(hits)
}

/// The recognizer of `0* ρ_U(X)` for the set `X` defined by the formula.
///
/// The canonical-form condition is conjoined first, the compiled word
/// language is closed under removing leading zeros (the left quotient by
/// `0*`, exact for any regular language), restricted to canonical unpadded
/// representations, and finally re-padded.
pub fn formula_language(
    formula: &NumFormula,
    system: &NumerationSystem,
) -> Result<Dfa, LogicError> {
    let injected = inject_canonical(formula, system)?;
    let compiled = super::compile_sf(&num_to_sf(&injected), &system.digit_alphabet())?;
    let zero = Symbol::Digit(0);
    // the quotient also settles n = 0: the empty word stays in exactly when
    // some all-zero word satisfied the formula
    let searched = compiled.zero_quotient(zero)?;
    let canonical = system.canonical_dfa()?;
    let unpadded = searched
        .intersection(&canonical)?
        .strip_leading_zeros(zero)?;
    Ok(unpadded.leading_zero_closure(zero)?.minimized())
}

/// `n ≤ horizon` whose padded representation the automaton accepts; the
/// automaton-side counterpart of [`define_set`] used for cross-validation.
pub fn accepted_values(
    dfa: &Dfa,
    system: &NumerationSystem,
    horizon: u64,
) -> Result<Vec<Nat>, LogicError> {
    let padded = dfa.zero_quotient(Symbol::Digit(0))?;
    let mut hits = Vec::new();
    for n in 0..=horizon {
        let n = Nat::from(n);
        let repr = system.greedy_repr(&n)?;
        if padded.accepts(&repr) {
            hits.push(n.clone());
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;
    use crate::logic::{catalog, eval_num};
    use num_traits::ToPrimitive;

    fn nat_to_u64(n: &Nat) -> u64 {
        n.to_u64().expect("test-scale value")
    }

    #[test]
    fn translations_are_mutually_inverse_on_the_corpus() {
        let base2 = NumerationSystem::base(2).unwrap();
        for (sf, num) in catalog::translation_corpus() {
            assert_eq!(num_to_sf(&num), sf);
            assert_eq!(sf_to_num(&sf, &base2).unwrap(), num);
            assert_eq!(num_to_sf(&sf_to_num(&sf, &base2).unwrap()), sf);
        }
    }

    #[test]
    fn single_one_defines_powers_of_two() {
        let base2 = NumerationSystem::base(2).unwrap();
        let formula = catalog::single_one_num();
        let set = define_set(&formula, &base2, 4096, None).unwrap();
        let expect: Vec<Nat> = (0..=12).map(|i| Nat::from(1u64 << i)).collect();
        assert_eq!(set, expect);
    }

    #[test]
    fn ones_then_zeros_defines_the_matching_integers() {
        let base2 = NumerationSystem::base(2).unwrap();
        let formula = catalog::ones_then_zeros_num();
        let set = define_set(&formula, &base2, 64, None).unwrap();
        let expect: Vec<Nat> = (1u64..=64)
            .filter(|&n| {
                let repr = base2.greedy_repr(&Nat::from(n)).unwrap();
                let digits = repr.digits().unwrap();
                let split = digits.iter().position(|&d| d == 0).unwrap_or(digits.len());
                digits[split..].iter().all(|&d| d == 0)
            })
            .map(Nat::from)
            .collect();
        assert_eq!(set, expect);
        let first: Vec<u64> = set.iter().take(10).map(nat_to_u64).collect();
        assert_eq!(first, vec![1, 2, 3, 4, 6, 7, 8, 12, 14, 15]);
    }

    #[test]
    fn canonical_sentence_for_base_is_tautology() {
        let base3 = NumerationSystem::base(3).unwrap();
        let sentence = canonical_sentence(&base3).unwrap();
        let compiled = super::super::compile_sf(&sentence, &base3.digit_alphabet()).unwrap();
        assert!(compiled
            .equivalent(&Dfa::sigma_plus(base3.digit_alphabet()))
            .unwrap());
    }

    #[test]
    fn canonical_sentence_fibonacci_matches_automaton() {
        let fib = NumerationSystem::fibonacci();
        let sentence = canonical_sentence(&fib).unwrap();
        let compiled = super::super::compile_sf(&sentence, &fib.digit_alphabet()).unwrap();
        let reference = fib
            .canonical_dfa()
            .unwrap()
            .intersection(&Dfa::sigma_plus(fib.digit_alphabet()))
            .unwrap();
        assert!(compiled.equivalent(&reference).unwrap());
    }

    #[test]
    fn inject_canonical_is_inert_for_bases(){
        let base2 = NumerationSystem::base(2).unwrap();
        let formula = catalog::single_one_num();
        let injected = inject_canonical(&formula, &base2).unwrap();
        let plain = define_set(&formula, &base2, 256, None).unwrap();
        let wrapped = define_set(&injected, &base2, 256, None).unwrap();
        assert_eq!(plain, wrapped);
    }

    #[test]
    fn inject_canonical_of_unsatisfiable_main_is_empty() {
        let fib = NumerationSystem::fibonacci();
        let contradiction = NumFormula::new(NumBody::exists(
            "x",
            NumBody::Less("x".into(), "x".into()),
        ))
        .unwrap();
        let injected = inject_canonical(&contradiction, &fib).unwrap();
        assert!(define_set(&injected, &fib, 200, Some(4)).unwrap().is_empty());
    }

    #[test]
    fn formula_language_matches_define_set() {
        let base2 = NumerationSystem::base(2).unwrap();
        for formula in [catalog::single_one_num(), catalog::ones_then_zeros_num()] {
            let dfa = formula_language(&formula, &base2).unwrap();
            let by_eval = define_set(&formula, &base2, 512, None).unwrap();
            let by_dfa = accepted_values(&dfa, &base2, 512).unwrap();
            assert_eq!(by_eval, by_dfa);
            // the recognizer is zero-closed
            for n in [0u64, 1, 2, 5, 8] {
                let repr = base2.greedy_repr(&Nat::from(n)).unwrap();
                let padded = Word::from_digits(&[0, 0]).concat(&repr);
                assert_eq!(dfa.accepts(&padded), dfa.accepts(&repr), "n = {n}");
            }
        }
    }

    #[test]
    fn eval_num_windows_over_the_bound() {
        // the formula "some digit 1 exists" needs b just above the leading term
        let base2 = NumerationSystem::base(2).unwrap();
        let formula = NumFormula::new(NumBody::exists("x", NumBody::Eps(1, "x".into()))).unwrap();
        for n in 1u64..64 {
            assert!(eval_num(&formula, &Nat::from(n), &base2, 0).unwrap());
        }
        assert!(!eval_num(&formula, &Nat::from(0u64), &base2, 5).unwrap());
    }

    #[test]
    fn max_translation_reaches_the_leading_position() {
        // "the leading letter is 1" holds exactly for n whose greedy word
        // starts with 1 — in base 2 every n ≥ 1, with zero padding excluded
        let base2 = NumerationSystem::base(2).unwrap();
        let sentence = crate::logic::parse_sf("(P 1 max)").unwrap();
        let translated = sf_to_num(&sentence, &base2).unwrap();
        // with slack 0 the window has no padding, so max sits on the leading digit
        for n in 1u64..=64 {
            assert!(eval_num(&translated, &Nat::from(n), &base2, 0).unwrap(), "n = {n}");
        }
    }
}
