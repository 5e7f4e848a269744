//! Nondeterministic automata and the subset construction.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Alphabet, Dfa, StateId};

/// Nondeterministic automaton with epsilon moves.
///
/// Used as scratch space for concatenation, reversal, projection and the
/// leading-zero constructions; every consumer determinizes straight away.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Alphabet,
    state_count: usize,
    initials: BTreeSet<StateId>,
    accepting: BTreeSet<StateId>,
    /// transitions[state][symbol_index] = target set
    transitions: Vec<Vec<BTreeSet<StateId>>>,
    epsilon: Vec<BTreeSet<StateId>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, state_count: usize) -> Self {
        let width = alphabet.len();
        Nfa {
            alphabet,
            state_count,
            initials: BTreeSet::new(),
            accepting: BTreeSet::new(),
            transitions: vec![vec![BTreeSet::new(); width]; state_count],
            epsilon: vec![BTreeSet::new(); state_count],
        }
    }

    /// Copy of a Dfa's transition structure.
    pub fn from_dfa(dfa: &Dfa) -> Self {
        let mut nfa = Nfa::new(dfa.alphabet().clone(), dfa.state_count());
        nfa.initials.insert(dfa.initial());
        for state in 0..dfa.state_count() {
            if dfa.is_accepting(state) {
                nfa.accepting.insert(state);
            }
            for column in 0..dfa.alphabet().len() {
                nfa.transitions[state][column].insert(dfa.step(state, column));
            }
        }
        nfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn add_state(&mut self) -> StateId {
        let id = self.state_count;
        self.state_count += 1;
        self.transitions.push(vec![BTreeSet::new(); self.alphabet.len()]);
        self.epsilon.push(BTreeSet::new());
        id
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initials.insert(state);
    }

    pub fn set_accepting(&mut self, state: StateId) {
        self.accepting.insert(state);
    }

    pub fn add_transition(&mut self, from: StateId, symbol_index: usize, to: StateId) {
        self.transitions[from][symbol_index].insert(to);
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) {
        self.epsilon[from].insert(to);
    }

    fn epsilon_closure(&self, set: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut closed = set.clone();
        let mut queue: VecDeque<StateId> = set.iter().copied().collect();
        while let Some(state) = queue.pop_front() {
            for &next in &self.epsilon[state] {
                if closed.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        closed
    }

    /// Subset construction. Reachable subset states only; a dead sink keeps
    /// the result total. States come out in canonical BFS order.
    pub fn determinize(&self) -> Dfa {
        let width = self.alphabet.len();
        let start = self.epsilon_closure(&self.initials);
        let mut index: HashMap<BTreeSet<StateId>, StateId> = HashMap::new();
        let mut subsets: Vec<BTreeSet<StateId>> = Vec::new();
        let mut transitions: Vec<Vec<StateId>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(start.clone(), 0);
        subsets.push(start);
        queue.push_back(0usize);
        // states pop in discovery order, so rows land in id order
        while let Some(id) = queue.pop_front() {
            let subset = subsets[id].clone();
            let mut row = Vec::with_capacity(width);
            for column in 0..width {
                let mut targets = BTreeSet::new();
                for &state in &subset {
                    targets.extend(self.transitions[state][column].iter().copied());
                }
                let targets = self.epsilon_closure(&targets);
                let next_id = match index.get(&targets) {
                    Some(&existing) => existing,
                    None => {
                        let fresh = subsets.len();
                        index.insert(targets.clone(), fresh);
                        subsets.push(targets);
                        queue.push_back(fresh);
                        fresh
                    }
                };
                row.push(next_id);
            }
            debug_assert_eq!(transitions.len(), id);
            transitions.push(row);
        }
        let accepting: Vec<StateId> = subsets
            .iter()
            .enumerate()
            .filter(|(_, subset)| subset.iter().any(|s| self.accepting.contains(s)))
            .map(|(id, _)| id)
            .collect();
        Dfa::new(self.alphabet.clone(), transitions, 0, accepting)
            .expect("subset construction produces a well-formed table")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Symbol, Word};

    #[test]
    fn determinize_nondeterministic_split() {
        // {1}{0,1}*: initial guesses nothing; 1 goes to an accepting loop
        let alphabet = Alphabet::digits(1);
        let mut nfa = Nfa::new(alphabet, 2);
        nfa.set_initial(0);
        nfa.set_accepting(1);
        nfa.add_transition(0, 1, 1);
        nfa.add_transition(1, 0, 1);
        nfa.add_transition(1, 1, 1);
        let dfa = nfa.determinize();
        // start, accepting loop, sink
        assert_eq!(dfa.state_count(), 3);
        assert!(dfa.accepts(&Word::from_digits(&[1])));
        assert!(dfa.accepts(&Word::from_digits(&[1, 0, 1])));
        assert!(!dfa.accepts(&Word::from_digits(&[0, 1])));
        assert!(!dfa.accepts(&Word::empty()));
    }

    #[test]
    fn determinize_of_deterministic_input_is_identity_up_to_trim() {
        let dfa = Dfa::new(
            Alphabet::digits(1),
            vec![vec![0, 1], vec![1, 0]],
            0,
            [1],
        )
        .unwrap();
        let redone = Nfa::from_dfa(&dfa).determinize();
        assert_eq!(redone.state_count(), dfa.state_count());
        for len in 0..=6 {
            for w in Dfa::words_of_length(dfa.alphabet(), len) {
                assert_eq!(dfa.accepts(&w), redone.accepts(&w));
            }
        }
    }

    #[test]
    fn determinize_empty_initials_gives_empty_language() {
        let nfa = Nfa::new(Alphabet::digits(2), 3);
        let dfa = nfa.determinize();
        assert!(!dfa.accepts(&Word::empty()));
        assert!(!dfa.accepts(&Word::from_digits(&[0, 1, 2])));
        assert_eq!(dfa.state_count(), 1);
    }

    #[test]
    fn epsilon_moves_reach_accepting() {
        let alphabet = Alphabet::new(vec![Symbol::Digit(0)]).unwrap();
        let mut nfa = Nfa::new(alphabet, 2);
        nfa.set_initial(0);
        nfa.add_epsilon(0, 1);
        nfa.set_accepting(1);
        let dfa = nfa.determinize();
        assert!(dfa.accepts(&Word::empty()));
        assert!(!dfa.accepts(&Word::from_digits(&[0])));
    }
}
