//! DFA minimization by partition refinement, with the onto map from source
//! states to classes of the minimal automaton.

use super::{Dfa, StateId, Word};

/// Surjection from the reachable states of a source automaton onto the states
/// of its minimal automaton. Commutes with transitions:
/// `morphism(δ(q, w)) = δ_min(morphism(q), w)` for every reachable `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateMorphism {
    /// `map[q]` is `None` exactly when `q` is unreachable in the source.
    map: Vec<Option<StateId>>,
}

impl StateMorphism {
    pub fn apply(&self, state: StateId) -> Option<StateId> {
        self.map.get(state).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<StateId>] {
        &self.map
    }
}

impl Dfa {
    /// The unique (up to renaming) minimal complete automaton of the language,
    /// together with the class map. The result is in canonical BFS order.
    pub fn minimize(&self) -> (Dfa, StateMorphism) {
        let reachable = self.reachable_states();
        let width = self.alphabet().len();

        // block id per reachable-list position; start from accept/reject
        let position: std::collections::HashMap<StateId, usize> = reachable
            .iter()
            .enumerate()
            .map(|(i, &q)| (q, i))
            .collect();
        let mut block: Vec<usize> = reachable
            .iter()
            .map(|&q| usize::from(self.is_accepting(q)))
            .collect();
        let mut block_count = 2;

        loop {
            let mut signature_index = std::collections::HashMap::new();
            let mut next_block = vec![0usize; reachable.len()];
            let mut next_count = 0usize;
            for (i, &q) in reachable.iter().enumerate() {
                let mut signature = Vec::with_capacity(width + 1);
                signature.push(block[i]);
                for column in 0..width {
                    signature.push(block[position[&self.step(q, column)]]);
                }
                let id = *signature_index.entry(signature).or_insert_with(|| {
                    let id = next_count;
                    next_count += 1;
                    id
                });
                next_block[i] = id;
            }
            let stable = next_count == block_count;
            block = next_block;
            block_count = next_count;
            if stable {
                break;
            }
        }

        // the quotient automaton, then canonical renumbering
        let mut quotient_transitions = vec![vec![usize::MAX; width]; block_count];
        let mut quotient_accepting = vec![false; block_count];
        for (i, &q) in reachable.iter().enumerate() {
            let b = block[i];
            quotient_accepting[b] = self.is_accepting(q);
            for column in 0..width {
                quotient_transitions[b][column] = block[position[&self.step(q, column)]];
            }
        }
        let quotient = Dfa::new(
            self.alphabet().clone(),
            quotient_transitions,
            block[position[&self.initial()]],
            quotient_accepting
                .iter()
                .enumerate()
                .filter_map(|(b, &acc)| acc.then_some(b)),
        )
        .expect("quotient table is well-formed");

        let order = quotient.reachable_states();
        let mut renumber = vec![usize::MAX; quotient.state_count()];
        for (fresh, &old) in order.iter().enumerate() {
            renumber[old] = fresh;
        }
        let minimal = quotient.canonicalized();

        let mut map = vec![None; self.state_count()];
        for (i, &q) in reachable.iter().enumerate() {
            map[q] = Some(renumber[block[i]]);
        }
        (minimal, StateMorphism { map })
    }

    /// Minimal automaton only.
    pub fn minimized(&self) -> Dfa {
        self.minimize().0
    }

    /// Check the morphism law `Φ(δ(q, w)) = δ_min(Φ(q), w)` for one sample.
    pub fn morphism_commutes(&self, minimal: &Dfa, morphism: &StateMorphism, state: StateId, word: &Word) -> bool {
        match (morphism.apply(self.run_from(state, word)), morphism.apply(state)) {
            (Some(lhs), Some(image)) => lhs == minimal.run_from(image, word),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    // 1+0* with a duplicated accepting state
    fn redundant_one_plus_zero_star() -> Dfa {
        // states: 0 start, 1 seen-1s, 2 seen-1s-then-0s (duplicate of 3), 3 same, 4 sink
        Dfa::new(
            Alphabet::digits(1),
            vec![
                vec![4, 1],
                vec![2, 1],
                vec![3, 4],
                vec![2, 4],
                vec![4, 4],
            ],
            0,
            [1, 2, 3],
        )
        .unwrap()
    }

    #[test]
    fn minimize_merges_duplicate_classes() {
        let dfa = redundant_one_plus_zero_star();
        let (minimal, _) = dfa.minimize();
        // start, "seen 1s", "seen 1s then 0s", sink
        assert_eq!(minimal.state_count(), 4);
        for len in 0..=7 {
            for w in Dfa::words_of_length(dfa.alphabet(), len) {
                assert_eq!(dfa.accepts(&w), minimal.accepts(&w), "word {w}");
            }
        }
    }

    #[test]
    fn minimize_is_idempotent() {
        let (minimal, _) = redundant_one_plus_zero_star().minimize();
        let (again, morphism) = minimal.minimize();
        assert_eq!(minimal.state_count(), again.state_count());
        // on an already-minimal automaton the morphism is a bijection
        let mut images: Vec<_> = (0..minimal.state_count())
            .map(|q| morphism.apply(q).unwrap())
            .collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len(), minimal.state_count());
    }

    #[test]
    fn all_accepting_collapses_to_universal() {
        let dfa = Dfa::new(
            Alphabet::digits(2),
            vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]],
            0,
            [0, 1, 2],
        )
        .unwrap();
        let (minimal, _) = dfa.minimize();
        assert_eq!(minimal.state_count(), 1);
        assert!(minimal.is_accepting(0));
    }

    #[test]
    fn morphism_commutes_on_words() {
        let dfa = redundant_one_plus_zero_star();
        let (minimal, morphism) = dfa.minimize();
        for state in 0..dfa.state_count() {
            for len in 0..=5 {
                for w in Dfa::words_of_length(dfa.alphabet(), len) {
                    assert!(dfa.morphism_commutes(&minimal, &morphism, state, &w));
                }
            }
        }
    }
}
