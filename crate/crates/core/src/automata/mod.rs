//! Finite-automata engine over digit and digit-pair alphabets.
//!
//! Every [`Dfa`] in this crate is complete: the transition table has an entry
//! for each `(state, symbol)` pair, with an explicit sink absorbing rejected
//! prefixes. Completeness is what makes the transition-monoid test behind
//! [`Dfa::is_aperiodic`] meaningful, so constructors enforce it rather than
//! trusting callers. State numbering is canonical (breadth-first from the
//! initial state, symbols in alphabet order), which keeps serialized
//! artifacts byte-stable.

mod aperiodic;
mod json;
mod minimize;
mod nfa;
mod ops;

pub use aperiodic::{AperiodicityReport, DefinitenessReport, PermutationWitness, DEFAULT_MONOID_CAP};
pub use json::dfa_to_dot;
pub use minimize::StateMorphism;
pub use nfa::Nfa;
pub use ops::BooleanOp;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index of a state inside an automaton's table.
pub type StateId = usize;

/// Errors raised while constructing or combining automata.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("alphabet contains duplicate symbol {0}")]
    DuplicateSymbol(Symbol),

    #[error("state {state} is outside the valid range 0..{count}")]
    InvalidState { state: StateId, count: usize },

    #[error("transition table row {state} has {got} entries, expected {expected}")]
    MalformedRow {
        state: StateId,
        got: usize,
        expected: usize,
    },

    #[error("symbol {0} is not part of the automaton's alphabet")]
    UnknownSymbol(Symbol),

    #[error("operands use different alphabets")]
    AlphabetMismatch,

    #[error("transition monoid exceeded the cap of {0} elements")]
    MonoidCapExceeded(usize),

    #[error("automaton is not aperiodic; no aperiodicity index exists")]
    NotAperiodic,

    #[error("malformed automaton description: {0}")]
    MalformedDescription(String),
}

/// A letter of a digit alphabet, or a synchronized pair of such letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Digit(u32),
    Pair(u32, u32),
}

impl Symbol {
    pub fn digit(self) -> Option<u32> {
        match self {
            Symbol::Digit(d) => Some(d),
            Symbol::Pair(..) => None,
        }
    }

    pub fn pair(self) -> Option<(u32, u32)> {
        match self {
            Symbol::Digit(_) => None,
            Symbol::Pair(l, r) => Some((l, r)),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Digit(d) => write!(f, "{d}"),
            Symbol::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// Ordered set of pairwise-distinct symbols.
///
/// Ordering is numeric for digits and lexicographic for pairs; symbol indices
/// into this order are what transition tables are keyed by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(mut symbols: Vec<Symbol>) -> Result<Self, AutomatonError> {
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        symbols.sort_unstable();
        for pair in symbols.windows(2) {
            if pair[0] == pair[1] {
                return Err(AutomatonError::DuplicateSymbol(pair[0]));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The digit alphabet `{0, .., max}`.
    pub fn digits(max: u32) -> Self {
        Alphabet {
            symbols: (0..=max).map(Symbol::Digit).collect(),
        }
    }

    /// The digit alphabet `{lo, .., hi}`.
    pub fn digit_range(lo: u32, hi: u32) -> Self {
        assert!(lo <= hi, "empty digit range");
        Alphabet {
            symbols: (lo..=hi).map(Symbol::Digit).collect(),
        }
    }

    /// Product alphabet of all `(left, right)` digit pairs.
    pub fn pairs(left: &Alphabet, right: &Alphabet) -> Self {
        let mut symbols = Vec::with_capacity(left.len() * right.len());
        for l in &left.symbols {
            for r in &right.symbols {
                let (Symbol::Digit(l), Symbol::Digit(r)) = (l, r) else {
                    panic!("pair alphabets are built from digit alphabets");
                };
                symbols.push(Symbol::Pair(*l, *r));
            }
        }
        symbols.sort_unstable();
        Alphabet { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, index: usize) -> Symbol {
        self.symbols[index]
    }

    pub fn index_of(&self, symbol: Symbol) -> Option<usize> {
        self.symbols.binary_search(&symbol).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().copied()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// True when every symbol of `self` also belongs to `other`.
    pub fn subset_of(&self, other: &Alphabet) -> bool {
        self.symbols.iter().all(|s| other.index_of(*s).is_some())
    }
}

/// A finite word, most-significant letter first. The empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Symbol>,
}

impl Word {
    pub fn new(letters: Vec<Symbol>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Word of plain digits, most-significant first.
    pub fn from_digits(digits: &[u32]) -> Self {
        Word {
            letters: digits.iter().map(|&d| Symbol::Digit(d)).collect(),
        }
    }

    /// Parse a word of single-character digits, e.g. `"1001"`.
    /// Dot-separated form (`"11.3.0"`) covers digits beyond 9.
    pub fn parse_digits(text: &str) -> Result<Self, AutomatonError> {
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let bad = || AutomatonError::MalformedDescription(format!("cannot parse word {text:?}"));
        let digits: Vec<u32> = if text.contains('.') {
            text.split('.')
                .map(|part| part.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        Ok(Word::from_digits(&digits))
    }

    /// Zip two equal-length digit words into a pair word.
    pub fn zip_pairs(left: &Word, right: &Word) -> Option<Word> {
        if left.len() != right.len() {
            return None;
        }
        let letters = left
            .letters
            .iter()
            .zip(&right.letters)
            .map(|(l, r)| Some(Symbol::Pair(l.digit()?, r.digit()?)))
            .collect::<Option<Vec<_>>>()?;
        Some(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn repeat(&self, times: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() * times);
        for _ in 0..times {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Digit view of the word; `None` if any letter is a pair.
    pub fn digits(&self) -> Option<Vec<u32>> {
        self.letters.iter().map(|s| s.digit()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dotted = self
            .letters
            .iter()
            .any(|s| matches!(s, Symbol::Digit(d) if *d >= 10));
        for (i, letter) in self.letters.iter().enumerate() {
            if dotted && i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// Complete deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    /// `transitions[state][symbol_index]` is total by construction.
    transitions: Vec<Vec<StateId>>,
    initial: StateId,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        transitions: Vec<Vec<StateId>>,
        initial: StateId,
        accepting: impl IntoIterator<Item = StateId>,
    ) -> Result<Self, AutomatonError> {
        let count = transitions.len();
        if initial >= count {
            return Err(AutomatonError::InvalidState {
                state: initial,
                count,
            });
        }
        for (state, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AutomatonError::MalformedRow {
                    state,
                    got: row.len(),
                    expected: alphabet.len(),
                });
            }
            for &target in row {
                if target >= count {
                    return Err(AutomatonError::InvalidState {
                        state: target,
                        count,
                    });
                }
            }
        }
        let mut accepting_flags = vec![false; count];
        for state in accepting {
            if state >= count {
                return Err(AutomatonError::InvalidState { state, count });
            }
            accepting_flags[state] = true;
        }
        Ok(Dfa {
            alphabet,
            transitions,
            initial,
            accepting: accepting_flags,
        })
    }

    /// The automaton of the empty language.
    pub fn empty(alphabet: Alphabet) -> Self {
        let width = alphabet.len();
        Dfa {
            alphabet,
            transitions: vec![vec![0; width]],
            initial: 0,
            accepting: vec![false],
        }
    }

    /// The automaton of all words over `alphabet`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let width = alphabet.len();
        Dfa {
            alphabet,
            transitions: vec![vec![0; width]],
            initial: 0,
            accepting: vec![true],
        }
    }

    /// The automaton of all nonempty words.
    pub fn sigma_plus(alphabet: Alphabet) -> Self {
        let width = alphabet.len();
        Dfa {
            alphabet,
            transitions: vec![vec![1; width], vec![1; width]],
            initial: 0,
            accepting: vec![false, true],
        }
    }

    /// Trie automaton of a finite word set, completed with a sink.
    pub fn from_word_set(alphabet: Alphabet, words: &[Word]) -> Result<Self, AutomatonError> {
        let width = alphabet.len();
        // state 0 = root; sink gets appended last
        let mut transitions: Vec<Vec<Option<StateId>>> = vec![vec![None; width]];
        let mut accepting: Vec<bool> = vec![false];
        for word in words {
            let mut state = 0usize;
            for &letter in word.letters() {
                let column = alphabet
                    .index_of(letter)
                    .ok_or(AutomatonError::UnknownSymbol(letter))?;
                state = match transitions[state][column] {
                    Some(next) => next,
                    None => {
                        transitions.push(vec![None; width]);
                        accepting.push(false);
                        let next = transitions.len() - 1;
                        transitions[state][column] = Some(next);
                        next
                    }
                };
            }
            accepting[state] = true;
        }
        let sink = transitions.len();
        let transitions = transitions
            .into_iter()
            .map(|row| row.into_iter().map(|t| t.unwrap_or(sink)).collect())
            .chain(std::iter::once(vec![sink; width]))
            .collect();
        accepting.push(false);
        Ok(Dfa {
            alphabet,
            transitions,
            initial: 0,
            accepting,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> BTreeSet<StateId> {
        self.accepting
            .iter()
            .enumerate()
            .filter_map(|(i, &acc)| acc.then_some(i))
            .collect()
    }

    pub fn step(&self, state: StateId, symbol_index: usize) -> StateId {
        self.transitions[state][symbol_index]
    }

    pub fn transitions(&self) -> &[Vec<StateId>] {
        &self.transitions
    }

    /// Run the automaton from `state`. Panics on letters outside the alphabet;
    /// use [`Alphabet::index_of`] to validate untrusted input first.
    pub fn run_from(&self, state: StateId, word: &Word) -> StateId {
        word.letters().iter().fold(state, |q, &letter| {
            let column = self
                .alphabet
                .index_of(letter)
                .unwrap_or_else(|| panic!("letter {letter} not in alphabet"));
            self.transitions[q][column]
        })
    }

    pub fn run(&self, word: &Word) -> StateId {
        self.run_from(self.initial, word)
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.accepting[self.run(word)]
    }

    /// States in breadth-first discovery order from the initial state.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut order = Vec::with_capacity(self.state_count());
        let mut queue = std::collections::VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(state) = queue.pop_front() {
            order.push(state);
            for &next in &self.transitions[state] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        order
    }

    /// Renumber states in canonical BFS order, dropping unreachable ones.
    pub fn canonicalized(&self) -> Dfa {
        let order = self.reachable_states();
        let mut new_id = vec![usize::MAX; self.state_count()];
        for (fresh, &old) in order.iter().enumerate() {
            new_id[old] = fresh;
        }
        let transitions = order
            .iter()
            .map(|&old| self.transitions[old].iter().map(|&t| new_id[t]).collect())
            .collect();
        let accepting = order.iter().map(|&old| self.accepting[old]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            transitions,
            initial: 0,
            accepting,
        }
    }

    /// Shortest accepted word, by BFS; `None` for the empty language.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let mut back: Vec<Option<(StateId, usize)>> = vec![None; self.state_count()];
        let mut seen = vec![false; self.state_count()];
        let mut queue = std::collections::VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        let mut hit = None;
        'bfs: while let Some(state) = queue.pop_front() {
            if self.accepting[state] {
                hit = Some(state);
                break 'bfs;
            }
            for (column, &next) in self.transitions[state].iter().enumerate() {
                if !seen[next] {
                    seen[next] = true;
                    back[next] = Some((state, column));
                    queue.push_back(next);
                }
            }
        }
        let mut state = hit?;
        let mut letters = Vec::new();
        while let Some((prev, column)) = back[state] {
            letters.push(self.alphabet.get(column));
            state = prev;
        }
        letters.reverse();
        Some(Word::new(letters))
    }

    /// Enumerate all words of length `len` (alphabet-order-major).
    pub fn words_of_length(alphabet: &Alphabet, len: usize) -> impl Iterator<Item = Word> + '_ {
        let width = alphabet.len();
        let total = width.checked_pow(len as u32).expect("word space overflow");
        (0..total).map(move |mut code| {
            let mut letters = vec![alphabet.get(0); len];
            for slot in (0..len).rev() {
                letters[slot] = alphabet.get(code % width);
                code /= width;
            }
            Word::new(letters)
        })
    }
}
