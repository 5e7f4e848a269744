//! Base-change constructions on recognizers: digit grouping `p → p^k` and
//! letter-to-block expansion `p^k → p`.
//!
//! Grouping reinterprets each letter `j` of the larger alphabet as the
//! zero-padded length-`k` base-`p` block of `j`, acting on the very same
//! state set; it preserves permutation-freeness. The converse direction is
//! built and re-checked rather than assumed, because block substitution does
//! not commute with complementation, and the tool reports what it computes.

use thiserror::Error;

use crate::automata::{Alphabet, AutomatonError, Dfa, Symbol, Word};
use crate::numeration::{Nat, NumerationError, NumerationSystem};

#[derive(Debug, Error)]
pub enum BaseChangeError {
    #[error("the source automaton must be closed under leading zeros")]
    NotZeroClosed,

    #[error("alphabet size {size} is not a power p^k of {p} with k ≥ 1")]
    NotAPowerAlphabet { size: usize, p: u32 },

    #[error("grouping failed to preserve permutation-freeness — this is a bug")]
    PreservationViolated,

    #[error("digit alphabets only: {0}")]
    BadAlphabet(String),

    #[error(transparent)]
    Automaton(#[from] AutomatonError),

    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

fn base_of(dfa: &Dfa) -> Result<u32, BaseChangeError> {
    let symbols = dfa.alphabet().symbols();
    for (i, symbol) in symbols.iter().enumerate() {
        if *symbol != Symbol::Digit(i as u32) {
            return Err(BaseChangeError::BadAlphabet(format!(
                "expected the contiguous digit alphabet, found {symbol}"
            )));
        }
    }
    Ok(symbols.len() as u32)
}

/// The zero-padded length-`k` base-`p` block of `j`.
fn block(system: &NumerationSystem, j: u64, k: u32) -> Result<Word, BaseChangeError> {
    let repr = system.greedy_repr(&Nat::from(j))?;
    let mut digits = vec![0u32; (k as usize).saturating_sub(repr.len())];
    digits.extend(repr.digits().expect("greedy words are digit words"));
    Ok(Word::from_digits(&digits))
}

/// Group a base-`p` recognizer into base `p^k`, closing under leading zeros
/// first. The pre-minimization automaton has the source's state set; the
/// returned one is minimized.
pub fn group_dfa(dfa: &Dfa, k: u32) -> Result<Dfa, BaseChangeError> {
    Ok(group_prepared(&prepare_source(dfa, true)?, k)?.minimized())
}

/// As [`group_dfa`] without the implicit closure: sources that are not
/// zero-closed are rejected.
pub fn group_dfa_strict(dfa: &Dfa, k: u32) -> Result<Dfa, BaseChangeError> {
    Ok(group_prepared(&prepare_source(dfa, false)?, k)?.minimized())
}

/// Closed and minimized source, ready for grouping.
fn prepare_source(dfa: &Dfa, auto_close: bool) -> Result<Dfa, BaseChangeError> {
    base_of(dfa)?;
    let closed = if auto_close {
        dfa.leading_zero_closure(Symbol::Digit(0))?
    } else {
        dfa.clone()
    };
    let minimal = closed.minimized();
    // grouping walks 0-padded blocks, so the initial state needs its 0-loop
    if minimal.step(minimal.initial(), 0) != minimal.initial() {
        return Err(BaseChangeError::NotZeroClosed);
    }
    Ok(minimal)
}

/// The same-state-set grouped automaton, not yet minimized.
fn group_prepared(source: &Dfa, k: u32) -> Result<Dfa, BaseChangeError> {
    assert!(k >= 1, "grouping needs k ≥ 1");
    let p = base_of(source)?;
    let system = NumerationSystem::base(p)?;
    let width = (p as u64)
        .checked_pow(k)
        .filter(|&w| w <= 1 << 20)
        .ok_or(BaseChangeError::NotAPowerAlphabet {
            size: usize::MAX,
            p,
        })? as usize;
    let mut transitions = Vec::with_capacity(source.state_count());
    for state in 0..source.state_count() {
        let mut row = Vec::with_capacity(width);
        for j in 0..width as u64 {
            row.push(source.run_from(state, &block(&system, j, k)?));
        }
        transitions.push(row);
    }
    Ok(Dfa::new(
        Alphabet::digits(width as u32 - 1),
        transitions,
        source.initial(),
        (0..source.state_count()).filter(|&q| source.is_accepting(q)),
    )?)
}

/// Expand a base-`p^k` recognizer to base `p`: each letter becomes its
/// length-`k` block read through fresh chain states, then the result is
/// determinized and minimized. No zero closure is applied here.
pub fn expand_dfa(dfa: &Dfa, p: u32) -> Result<Dfa, BaseChangeError> {
    let size = base_of(dfa)? as usize;
    if p < 2 {
        return Err(BaseChangeError::NotAPowerAlphabet { size, p });
    }
    let mut k = 0u32;
    let mut power = 1usize;
    while power < size {
        power *= p as usize;
        k += 1;
    }
    if power != size || k == 0 {
        return Err(BaseChangeError::NotAPowerAlphabet { size, p });
    }
    let system = NumerationSystem::base(p)?;
    let mut nfa = crate::automata::Nfa::new(Alphabet::digits(p - 1), dfa.state_count());
    nfa.set_initial(dfa.initial());
    for state in 0..dfa.state_count() {
        if dfa.is_accepting(state) {
            nfa.set_accepting(state);
        }
        for j in 0..size as u64 {
            let target = dfa.step(state, j as usize);
            let digits = block(&system, j, k)?;
            let digits = digits.digits().expect("blocks are digit words");
            // chain through k-1 fresh states
            let mut from = state;
            for (step, &digit) in digits.iter().enumerate() {
                let to = if step + 1 == digits.len() {
                    target
                } else {
                    nfa.add_state()
                };
                nfa.add_transition(from, digit as usize, to);
                from = to;
            }
        }
    }
    Ok(nfa.determinize().minimized())
}

/// Grouping report: both verdicts and the sampled membership agreement
/// between the two recognizers.
#[derive(Debug, Clone)]
pub struct GroupingReport {
    pub source: Dfa,
    pub grouped: Dfa,
    pub k: u32,
    pub source_aperiodic: bool,
    pub grouped_aperiodic: bool,
    /// Points `n ≤ horizon` where base-`p` and base-`p^k` membership agree.
    pub agreement: u64,
    pub sampled: u64,
}

/// Group and check: aperiodicity of the source must carry over to the
/// grouped automaton, and membership of `ρ_p(n)` must match membership of
/// `ρ_{p^k}(n)` pointwise.
pub fn grouping_preservation_check(
    dfa: &Dfa,
    k: u32,
    horizon: u64,
) -> Result<GroupingReport, BaseChangeError> {
    let source = prepare_source(dfa, true)?;
    let p = base_of(&source)?;
    let raw = group_prepared(&source, k)?;
    debug_assert_eq!(raw.state_count(), source.state_count());
    let grouped = raw.minimized();

    let source_aperiodic = source.is_aperiodic()?.aperiodic;
    let grouped_aperiodic = grouped.is_aperiodic()?.aperiodic;
    if source_aperiodic && !grouped_aperiodic {
        return Err(BaseChangeError::PreservationViolated);
    }

    let small = NumerationSystem::base(p)?;
    let large = NumerationSystem::base(p.pow(k))?;
    let mut agreement = 0u64;
    for n in 0..=horizon {
        let n = Nat::from(n);
        let in_source = source.accepts(&small.greedy_repr(&n)?);
        let in_grouped = grouped.accepts(&large.greedy_repr(&n)?);
        if in_source == in_grouped {
            agreement += 1;
        }
    }
    Ok(GroupingReport {
        source,
        grouped,
        k,
        source_aperiodic,
        grouped_aperiodic,
        agreement,
        sampled: horizon + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setspec::{up_to_dfa, UpSet};

    fn base(k: u32) -> NumerationSystem {
        NumerationSystem::base(k).unwrap()
    }

    fn even_base2() -> Dfa {
        up_to_dfa(&UpSet::progression(0, 2).unwrap(), &base(2)).unwrap()
    }

    #[test]
    fn grouping_even_to_base4() {
        let grouped = group_dfa(&even_base2(), 2).unwrap();
        let base4 = base(4);
        for n in 0u64..=10_000 {
            let repr = base4.greedy_repr(&Nat::from(n)).unwrap();
            assert_eq!(grouped.accepts(&repr), n % 2 == 0, "n = {n}");
        }
    }

    #[test]
    fn grouping_universal_is_universal() {
        let all = Dfa::universal(Alphabet::digits(1));
        let grouped = group_dfa(&all, 3).unwrap();
        assert_eq!(grouped.alphabet().len(), 8);
        assert!(grouped.equivalent(&Dfa::universal(Alphabet::digits(7))).unwrap());
    }

    #[test]
    fn grouping_six_multiples_to_base4() {
        let six = up_to_dfa(&UpSet::progression(0, 6).unwrap(), &base(2)).unwrap();
        let grouped = group_dfa(&six, 2).unwrap();
        let base4 = base(4);
        for n in 0u64..=10_000 {
            let repr = base4.greedy_repr(&Nat::from(n)).unwrap();
            assert_eq!(grouped.accepts(&repr), n % 6 == 0, "n = {n}");
        }
    }

    #[test]
    fn grouped_table_reads_blocks() {
        let source = prepare_source(&even_base2(), true).unwrap();
        let raw = group_prepared(&source, 2).unwrap();
        assert_eq!(raw.state_count(), source.state_count());
        assert_eq!(raw.initial(), source.initial());
        let system = base(2);
        for state in 0..source.state_count() {
            for j in 0..4u64 {
                let word = block(&system, j, 2).unwrap();
                assert_eq!(raw.step(state, j as usize), source.run_from(state, &word));
            }
        }
    }

    #[test]
    fn expansion_of_three_zero_star() {
        // 0*30* over the base-4 alphabet
        let alphabet = Alphabet::digits(3);
        let three = Dfa::from_word_set(alphabet.clone(), &[Word::parse_digits("3").unwrap()])
            .unwrap();
        let nonzero = Dfa::from_word_set(
            alphabet.clone(),
            &[
                Word::parse_digits("1").unwrap(),
                Word::parse_digits("2").unwrap(),
                Word::parse_digits("3").unwrap(),
            ],
        )
        .unwrap();
        let zeros = Dfa::universal(alphabet.clone())
            .concat(&nonzero)
            .unwrap()
            .concat(&Dfa::universal(alphabet.clone()))
            .unwrap()
            .complement();
        let lang = zeros.concat(&three).unwrap().concat(&zeros).unwrap();
        let expanded = expand_dfa(&lang, 2).unwrap();
        let closed = expanded.leading_zero_closure(Symbol::Digit(0)).unwrap();
        for (word, expect) in [
            ("11", true),
            ("1100", true),
            ("110000", true),
            ("011", true),
            ("110", false),
            ("1", false),
        ] {
            assert_eq!(closed.accepts(&Word::parse_digits(word).unwrap()), expect, "{word}");
        }
        // the closed expansion is the documented non-star-free case
        let report = closed.is_aperiodic().unwrap();
        assert!(!report.aperiodic);
        assert_eq!(report.witness.unwrap().word, Word::parse_digits("0").unwrap());
    }

    #[test]
    fn expand_then_group_round_trip() {
        // block expansion fixes the pad length modulo k, so recovering the
        // full padded language takes the 0* quotient, not just the closure
        let six = up_to_dfa(&UpSet::progression(0, 6).unwrap(), &base(2)).unwrap();
        let grouped = group_dfa(&six, 2).unwrap();
        let expanded = expand_dfa(&grouped, 2).unwrap();
        let closed = six.leading_zero_closure(Symbol::Digit(0)).unwrap();
        assert!(expanded
            .zero_quotient(Symbol::Digit(0))
            .unwrap()
            .equivalent(&closed)
            .unwrap());
    }

    #[test]
    fn expand_rejects_non_power_alphabets() {
        let lang = Dfa::universal(Alphabet::digits(5));
        assert!(matches!(
            expand_dfa(&lang, 2),
            Err(BaseChangeError::NotAPowerAlphabet { .. })
        ));
    }

    #[test]
    fn expand_empty_is_empty() {
        let expanded = expand_dfa(&Dfa::empty(Alphabet::digits(3)), 2).unwrap();
        assert!(expanded.equivalent(&Dfa::empty(Alphabet::digits(1))).unwrap());
    }

    #[test]
    fn preservation_check_on_even_integers() {
        for k in 1..=3u32 {
            let report = grouping_preservation_check(&even_base2(), k, 10_000).unwrap();
            assert!(report.source_aperiodic);
            assert!(report.grouped_aperiodic, "k = {k}");
            assert_eq!(report.agreement, report.sampled);
        }
    }

    #[test]
    fn preservation_check_records_non_aperiodic_source() {
        // even integers in base 3: not aperiodic before or after
        let even_b3 = up_to_dfa(&UpSet::progression(0, 2).unwrap(), &base(3)).unwrap();
        let report = grouping_preservation_check(&even_b3, 2, 2_000).unwrap();
        assert!(!report.source_aperiodic);
        assert!(!report.grouped_aperiodic);
        assert_eq!(report.agreement, report.sampled);
    }

    #[test]
    fn strict_grouping_rejects_unclosed_sources() {
        // {1}: no 0-loop at the initial state
        let one = Dfa::from_word_set(Alphabet::digits(1), &[Word::parse_digits("1").unwrap()])
            .unwrap();
        assert!(matches!(
            group_dfa_strict(&one, 2),
            Err(BaseChangeError::NotZeroClosed)
        ));
        assert!(group_dfa(&one, 2).is_ok());
    }
}
