//! Boolean algebra, concatenation, reversal and the leading-zero
//! constructions on complete DFAs.

use std::collections::{HashMap, VecDeque};

use super::{Alphabet, AutomatonError, Dfa, Nfa, StateId, Symbol, Word};

/// Binary language operations sharing one alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BooleanOp {
    Union,
    Intersection,
    Difference,
}

impl Dfa {
    /// Product construction for union, intersection and difference.
    pub fn boolean(&self, other: &Dfa, op: BooleanOp) -> Result<Dfa, AutomatonError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let width = self.alphabet().len();
        let combine = |a: bool, b: bool| match op {
            BooleanOp::Union => a || b,
            BooleanOp::Intersection => a && b,
            BooleanOp::Difference => a && !b,
        };
        // reachable part of the product only
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(self.initial(), other.initial())];
        index.insert(pairs[0], 0);
        let mut transitions: Vec<Vec<StateId>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let (p, q) = pairs[id];
            let mut row = Vec::with_capacity(width);
            for column in 0..width {
                let target = (self.step(p, column), other.step(q, column));
                let next = match index.get(&target) {
                    Some(&existing) => existing,
                    None => {
                        let fresh = pairs.len();
                        index.insert(target, fresh);
                        pairs.push(target);
                        queue.push_back(fresh);
                        fresh
                    }
                };
                row.push(next);
            }
            debug_assert_eq!(transitions.len(), id);
            transitions.push(row);
        }
        let accepting = pairs
            .iter()
            .enumerate()
            .filter(|(_, &(p, q))| combine(self.is_accepting(p), other.is_accepting(q)))
            .map(|(id, _)| id);
        Dfa::new(self.alphabet().clone(), transitions, 0, accepting)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        self.boolean(other, BooleanOp::Union)
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        self.boolean(other, BooleanOp::Intersection)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        self.boolean(other, BooleanOp::Difference)
    }

    pub fn symmetric_difference(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    /// Complement relative to `Σ*`; sound because the table is total.
    pub fn complement(&self) -> Dfa {
        let mut flipped = self.clone();
        for flag in &mut flipped.accepting {
            *flag = !*flag;
        }
        flipped
    }

    /// Concatenation through an epsilon-Nfa and determinization.
    pub fn concat(&self, other: &Dfa) -> Result<Dfa, AutomatonError> {
        if self.alphabet() != other.alphabet() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let width = self.alphabet().len();
        let offset = self.state_count();
        let mut nfa = Nfa::new(self.alphabet().clone(), offset + other.state_count());
        nfa.set_initial(self.initial());
        for state in 0..self.state_count() {
            for column in 0..width {
                nfa.add_transition(state, column, self.step(state, column));
            }
            if self.is_accepting(state) {
                nfa.add_epsilon(state, offset + other.initial());
            }
        }
        for state in 0..other.state_count() {
            for column in 0..width {
                nfa.add_transition(offset + state, column, offset + other.step(state, column));
            }
            if other.is_accepting(state) {
                nfa.set_accepting(offset + state);
            }
        }
        Ok(nfa.determinize())
    }

    /// The language of reversed words: swap initial and accepting, invert
    /// every edge, determinize.
    pub fn reverse(&self) -> Dfa {
        let width = self.alphabet().len();
        let mut nfa = Nfa::new(self.alphabet().clone(), self.state_count());
        nfa.set_accepting(self.initial());
        for state in 0..self.state_count() {
            if self.is_accepting(state) {
                nfa.set_initial(state);
            }
            for column in 0..width {
                nfa.add_transition(self.step(state, column), column, state);
            }
        }
        nfa.determinize()
    }

    /// `0*L` for the given zero symbol.
    pub fn leading_zero_closure(&self, zero: Symbol) -> Result<Dfa, AutomatonError> {
        let zero_column = self
            .alphabet()
            .index_of(zero)
            .ok_or(AutomatonError::UnknownSymbol(zero))?;
        let mut nfa = Nfa::from_dfa(self);
        let pad = nfa.add_state();
        nfa.set_initial(pad);
        nfa.add_epsilon(pad, self.initial());
        nfa.add_transition(pad, zero_column, pad);
        Ok(nfa.determinize())
    }

    /// `L \ (0 Σ*)`: drop every word starting with the zero symbol.
    pub fn strip_leading_zeros(&self, zero: Symbol) -> Result<Dfa, AutomatonError> {
        let zero_column = self
            .alphabet()
            .index_of(zero)
            .ok_or(AutomatonError::UnknownSymbol(zero))?;
        let width = self.alphabet().len();
        // 0 start, 1 = starts with zero (accept), 2 = starts otherwise
        let mut transitions = vec![vec![2; width]; 3];
        transitions[0][zero_column] = 1;
        transitions[1] = vec![1; width];
        transitions[2] = vec![2; width];
        let starts_with_zero = Dfa::new(self.alphabet().clone(), transitions, 0, [1])
            .expect("three-state table is well-formed");
        self.difference(&starts_with_zero)
    }

    /// `{w : 0^j w ∈ L for some j ≥ 0}` — the left quotient by `0*`.
    pub fn zero_quotient(&self, zero: Symbol) -> Result<Dfa, AutomatonError> {
        let zero_column = self
            .alphabet()
            .index_of(zero)
            .ok_or(AutomatonError::UnknownSymbol(zero))?;
        let mut nfa = Nfa::from_dfa(self);
        // every state on the 0-path from the initial state may start a run
        let mut state = self.initial();
        let mut seen = vec![false; self.state_count()];
        while !seen[state] {
            seen[state] = true;
            nfa.set_initial(state);
            state = self.step(state, zero_column);
        }
        Ok(nfa.determinize())
    }

    /// Same language over a larger alphabet; the new symbols reject.
    pub fn extend_alphabet(&self, alphabet: Alphabet) -> Result<Dfa, AutomatonError> {
        if !self.alphabet().subset_of(&alphabet) {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let sink = self.state_count();
        let transitions = (0..=self.state_count())
            .map(|state| {
                alphabet
                    .iter()
                    .map(|symbol| {
                        if state == sink {
                            return sink;
                        }
                        match self.alphabet().index_of(symbol) {
                            Some(column) => self.step(state, column),
                            None => sink,
                        }
                    })
                    .collect()
            })
            .collect();
        Dfa::new(
            alphabet,
            transitions,
            self.initial(),
            (0..self.state_count()).filter(|&q| self.is_accepting(q)),
        )
    }

    /// Language equality through symmetric-difference emptiness.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomatonError> {
        Ok(self.distinguishing_word(other)?.is_none())
    }

    /// Shortest word accepted by exactly one of the two automata.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Word>, AutomatonError> {
        Ok(self.symmetric_difference(other)?.shortest_accepted())
    }
}
