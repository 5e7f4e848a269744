//! Bijective (zero-free) digit systems and their link to greedy
//! representations: the normalization relation as a length-synchronized
//! letter-to-letter transducer, the padding product, projections, and the
//! star-freeness transfer pipeline in both directions.
//!
//! Pair words carry the bijective track on the left and the greedy track on
//! the right; the bijective track is padded with zeros on its
//! most-significant side to equalize lengths.

use thiserror::Error;

use crate::automata::{Alphabet, AutomatonError, Dfa, Symbol, Word};
use crate::numeration::{Nat, NumerationError, NumerationSystem};
use crate::setspec::{spec_to_dfa, SetSpec, SetSpecError};

#[derive(Debug, Error)]
pub enum PadicError {
    #[error("the two pipeline verdicts disagree — this is a bug")]
    VerdictMismatch,

    #[error("expected a pair alphabet")]
    NotAPairAlphabet,

    #[error(transparent)]
    Automaton(#[from] AutomatonError),

    #[error(transparent)]
    Numeration(#[from] NumerationError),

    #[error(transparent)]
    SetSpec(#[from] SetSpecError),
}

/// Which track of a pair language an operation singles out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A length-synchronized relation on word pairs, stored as a DFA over a pair
/// alphabet.
#[derive(Debug, Clone)]
pub struct Transducer {
    dfa: Dfa,
}

impl Transducer {
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// Does the relation contain the pair? The tracks must already have
    /// equal length.
    pub fn contains(&self, left: &Word, right: &Word) -> bool {
        match Word::zip_pairs(left, right) {
            Some(pair) => self.dfa.accepts(&pair),
            None => false,
        }
    }
}

/// The normalization relation for base `p`, most-significant digit first:
/// pairs `(0^t u, v)` with `u` zero-free over `{1..p}`, `v` over `{0..p-1}`,
/// equal lengths and equal numerical values.
///
/// Built least-significant-first from the carry recurrence
/// `a + carry_in = b + p·carry_out` over states (phase, carry), where the
/// pad phase admits only zeros on the bijective track, then reversed.
pub fn normalization_transducer(p: u32) -> Result<Transducer, PadicError> {
    Ok(Transducer {
        dfa: normalization_lsd(p)?.reverse().minimized(),
    })
}

/// The least-significant-first (reversed) relation.
pub fn normalization_transducer_lsd(p: u32) -> Result<Transducer, PadicError> {
    Ok(Transducer {
        dfa: normalization_lsd(p)?.minimized(),
    })
}

fn normalization_lsd(p: u32) -> Result<Dfa, PadicError> {
    assert!(p >= 2, "normalization needs p ≥ 2");
    let adic = Alphabet::digits(p); // {0..p}: digits plus the pad symbol
    let ary = Alphabet::digits(p - 1);
    let alphabet = Alphabet::pairs(&adic, &ary);
    let width = alphabet.len();
    // states: 0 = digits carry 0, 1 = digits carry 1, 2 = pad, 3 = dead
    let mut transitions = vec![vec![3usize; width]; 4];
    for (column, symbol) in alphabet.iter().enumerate() {
        let (a, b) = symbol.pair().expect("pair alphabet");
        for carry in 0..=1u32 {
            let state = carry as usize;
            if a == 0 {
                // the zero pad starts; it must absorb the carry exactly
                if b == carry {
                    transitions[state][column] = 2;
                }
            } else {
                // a + carry = b + p·carry_out with carry_out ∈ {0, 1}
                let lhs = a + carry;
                if lhs >= b && (lhs - b) % p == 0 && (lhs - b) / p <= 1 {
                    transitions[state][column] = ((lhs - b) / p) as usize;
                }
            }
        }
        if (a, b) == (0, 0) {
            transitions[2][column] = 2;
        }
    }
    Ok(Dfa::new(alphabet, transitions, 0, [0, 2])?)
}

/// `L ⊕ Γ*` (side = Left) or `Γ* ⊕ L` (side = Right): pairs of equal-length
/// words whose designated track lies in `L`, the other track free over `Γ`.
pub fn pad_product(lang: &Dfa, other: &Alphabet, side: Side) -> Result<Dfa, PadicError> {
    let alphabet = match side {
        Side::Left => Alphabet::pairs(lang.alphabet(), other),
        Side::Right => Alphabet::pairs(other, lang.alphabet()),
    };
    let width = alphabet.len();
    let transitions = (0..lang.state_count())
        .map(|state| {
            alphabet
                .iter()
                .map(|symbol| {
                    let (l, r) = symbol.pair().expect("pair alphabet");
                    let tracked = Symbol::Digit(match side {
                        Side::Left => l,
                        Side::Right => r,
                    });
                    let column = lang
                        .alphabet()
                        .index_of(tracked)
                        .expect("tracked symbol comes from the language alphabet");
                    lang.step(state, column)
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(transitions[0].len(), width);
    Ok(Dfa::new(
        alphabet,
        transitions,
        lang.initial(),
        (0..lang.state_count()).filter(|&q| lang.is_accepting(q)),
    )?)
}

/// Erase one track of a pair language: letter-to-letter image, determinized
/// and minimized.
pub fn project(pairs: &Dfa, side: Side) -> Result<Dfa, PadicError> {
    let mut symbols: Vec<Symbol> = pairs
        .alphabet()
        .iter()
        .map(|symbol| {
            let (l, r) = symbol.pair().ok_or(PadicError::NotAPairAlphabet)?;
            Ok(Symbol::Digit(match side {
                Side::Left => l,
                Side::Right => r,
            }))
        })
        .collect::<Result<Vec<_>, PadicError>>()?;
    symbols.sort_unstable();
    symbols.dedup();
    let alphabet = Alphabet::new(symbols)?;
    let mut nfa = crate::automata::Nfa::new(alphabet.clone(), pairs.state_count());
    nfa.set_initial(pairs.initial());
    for state in 0..pairs.state_count() {
        if pairs.is_accepting(state) {
            nfa.set_accepting(state);
        }
        for (column, symbol) in pairs.alphabet().iter().enumerate() {
            let (l, r) = symbol.pair().expect("checked above");
            let image = Symbol::Digit(match side {
                Side::Left => l,
                Side::Right => r,
            });
            let image_column = alphabet.index_of(image).expect("image symbol collected");
            nfa.add_transition(state, image_column, pairs.step(state, column));
        }
    }
    Ok(nfa.determinize().minimized())
}

/// From bijective to greedy: given `M` over `{1..p}` accepting the zero-free
/// representations of `X`, build the recognizer of `0*ρ_p(X)` through
/// `p₂[(0*M ⊕ Σ_p*) ∩ ν̂_p]`.
pub fn to_ary(adic: &Dfa, p: u32) -> Result<Dfa, PadicError> {
    let padded = adic
        .extend_alphabet(Alphabet::digits(p))?
        .leading_zero_closure(Symbol::Digit(0))?;
    let pairs = pad_product(&padded, &Alphabet::digits(p - 1), Side::Left)?;
    let relation = normalization_transducer(p)?;
    let constrained = pairs.intersection(relation.dfa())?;
    Ok(project(&constrained, Side::Right)?.minimized())
}

/// From greedy to bijective: given `M` accepting `0*ρ_p(X)`, build the
/// recognizer of the zero-free representations of `X` through
/// `p₁[({0..p}* ⊕ M) ∩ ν̂_p]`, then strip the zero pad (the left quotient by
/// `0*`, keeping only zero-free words).
pub fn to_adic(ary: &Dfa, p: u32) -> Result<Dfa, PadicError> {
    let pairs = pad_product(ary, &Alphabet::digits(p), Side::Right)?;
    let relation = normalization_transducer(p)?;
    let constrained = pairs.intersection(relation.dfa())?;
    let padded_adic = project(&constrained, Side::Left)?;
    // pad-then-digits shape, so no interior zero survives the strip
    let shape = zero_pad_shape(p);
    let stripped = padded_adic
        .intersection(&shape)?
        .zero_quotient(Symbol::Digit(0))?
        .strip_leading_zeros(Symbol::Digit(0))?;
    // land on the bijective alphabet {1..p}
    Ok(restrict_alphabet(&stripped.minimized(), &Alphabet::digit_range(1, p))?.minimized())
}

/// `0*{1..p}*` over `{0..p}`.
fn zero_pad_shape(p: u32) -> Dfa {
    let alphabet = Alphabet::digits(p);
    let width = alphabet.len();
    // 0 = reading the pad, 1 = reading digits, 2 = dead
    let mut transitions = vec![vec![0usize; width]; 3];
    for (column, symbol) in alphabet.iter().enumerate() {
        let digit = symbol.digit().unwrap();
        transitions[0][column] = if digit == 0 { 0 } else { 1 };
        transitions[1][column] = if digit == 0 { 2 } else { 1 };
        transitions[2][column] = 2;
    }
    Dfa::new(alphabet, transitions, 0, [0, 1]).expect("table is total")
}

/// Reinterpret over a sub-alphabet; words using dropped symbols vanish.
fn restrict_alphabet(dfa: &Dfa, alphabet: &Alphabet) -> Result<Dfa, PadicError> {
    let transitions = (0..dfa.state_count())
        .map(|state| {
            alphabet
                .iter()
                .map(|symbol| {
                    let column = dfa
                        .alphabet()
                        .index_of(symbol)
                        .expect("restriction to a sub-alphabet");
                    dfa.step(state, column)
                })
                .collect()
        })
        .collect();
    Ok(Dfa::new(
        alphabet.clone(),
        transitions,
        dfa.initial(),
        (0..dfa.state_count()).filter(|&q| dfa.is_accepting(q)),
    )?)
}

/// Both sides of the transfer: verdicts for `0*ρ_p(X)` and for the zero-free
/// representation language of the same set.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub ary: Dfa,
    pub adic: Dfa,
    pub ary_aperiodic: bool,
    pub adic_aperiodic: bool,
}

/// Build both representation languages of a set and check that the two
/// aperiodicity verdicts coincide.
pub fn transfer_check(spec: &SetSpec, p: u32) -> Result<TransferReport, PadicError> {
    let system = NumerationSystem::base(p)?;
    let ary = spec_to_dfa(spec, &system)?;
    let adic = to_adic(&ary, p)?;
    let ary_aperiodic = ary.is_aperiodic()?.aperiodic;
    let adic_aperiodic = adic.is_aperiodic()?.aperiodic;
    if ary_aperiodic != adic_aperiodic {
        return Err(PadicError::VerdictMismatch);
    }
    Ok(TransferReport {
        ary,
        adic,
        ary_aperiodic,
        adic_aperiodic,
    })
}

/// Zero-padded pair of the two representations of `n`, for tests and reports.
pub fn paired_representations(n: &Nat, p: u32) -> Result<(Word, Word), PadicError> {
    let adic = NumerationSystem::bijective(p)?;
    let ary = NumerationSystem::base(p)?;
    let left = adic.bijective_repr(n)?;
    let right = ary.greedy_repr(n)?;
    let len = left.len().max(right.len());
    let pad = |word: Word| {
        let mut digits = vec![0u32; len - word.len()];
        digits.extend(word.digits().expect("digit representations"));
        Word::from_digits(&digits)
    };
    Ok((pad(left), pad(right)))
}
