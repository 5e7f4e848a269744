//! Structural tests deciding star-freeness: the permutation-freeness check on
//! the transition monoid, the aperiodicity index, and definiteness.

use std::collections::{HashMap, VecDeque};

use super::{AutomatonError, Dfa, StateId, Word};

/// Cap on generated transition-monoid elements.
pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// A word inducing a nontrivial cyclic permutation of a set of states of the
/// minimal automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationWitness {
    pub word: Word,
    /// At least two pairwise-distinct states; the word maps each to the next,
    /// cyclically.
    pub cycle: Vec<StateId>,
}

impl PermutationWitness {
    /// Re-run the witness word on the minimal automaton (canonical
    /// numbering) and confirm it permutes the cycle states cyclically.
    pub fn validate(&self, minimal: &Dfa) -> bool {
        if self.cycle.len() < 2 {
            return false;
        }
        let mut distinct = self.cycle.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != self.cycle.len() {
            return false;
        }
        self.cycle.iter().enumerate().all(|(i, &state)| {
            state < minimal.state_count()
                && minimal.run_from(state, &self.word) == self.cycle[(i + 1) % self.cycle.len()]
        })
    }
}

/// Outcome of the permutation-freeness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperiodicityReport {
    pub aperiodic: bool,
    /// Least `n ≥ 1` with `f^n = f^(n+1)` for every monoid element; present
    /// exactly when aperiodic.
    pub index: Option<usize>,
    /// Present exactly when not aperiodic.
    pub witness: Option<PermutationWitness>,
    /// Number of distinct transition functions generated.
    pub monoid_size: usize,
}

/// Outcome of the definiteness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitenessReport {
    pub definite: bool,
    /// Least `k` such that membership of words of length `≥ k` depends only
    /// on the last `k` letters; present exactly when definite.
    pub horizon: Option<usize>,
    /// A cycle of distinct state pairs of the minimal automaton; present
    /// exactly when not definite.
    pub witness: Option<Vec<(StateId, StateId)>>,
}

/// One transition function together with a generating word.
struct MonoidElement {
    table: Vec<StateId>,
    word: Word,
}

fn compose(first: &[StateId], then: &[StateId]) -> Vec<StateId> {
    first.iter().map(|&q| then[q]).collect()
}

/// Least `m ∈ 1..=cap` with `f^m = f^(m+1)`, if any.
fn idempotent_power_index(f: &[StateId], cap: usize) -> Option<usize> {
    let mut power = f.to_vec();
    for m in 1..=cap {
        let next = compose(&power, f);
        if next == power {
            return Some(m);
        }
        power = next;
    }
    None
}

/// A cycle of length ≥ 2 in the functional graph of `f`, if one exists.
fn nontrivial_cycle(f: &[StateId]) -> Option<Vec<StateId>> {
    let n = f.len();
    for start in 0..n {
        // walk into the eventual cycle
        let mut slow = start;
        for _ in 0..n {
            slow = f[slow];
        }
        let mut cycle = vec![slow];
        let mut q = f[slow];
        while q != slow {
            cycle.push(q);
            q = f[q];
        }
        if cycle.len() >= 2 {
            return Some(cycle);
        }
    }
    None
}

impl Dfa {
    /// Permutation-freeness of the language, decided on the minimal automaton
    /// by generating the transition monoid and testing each element for an
    /// idempotent power. The default element cap is [`DEFAULT_MONOID_CAP`].
    pub fn is_aperiodic(&self) -> Result<AperiodicityReport, AutomatonError> {
        self.is_aperiodic_capped(DEFAULT_MONOID_CAP)
    }

    pub fn is_aperiodic_capped(&self, cap: usize) -> Result<AperiodicityReport, AutomatonError> {
        let minimal = self.minimized();
        let state_count = minimal.state_count();
        let width = minimal.alphabet().len();

        let generators: Vec<MonoidElement> = (0..width)
            .map(|column| MonoidElement {
                table: (0..state_count).map(|q| minimal.step(q, column)).collect(),
                word: Word::new(vec![minimal.alphabet().get(column)]),
            })
            .collect();

        // breadth-first closure over generators, deduplicating by table, so
        // each element keeps a shortest generating word
        let mut seen: HashMap<Vec<StateId>, usize> = HashMap::new();
        let mut elements: Vec<MonoidElement> = Vec::new();
        let mut queue = VecDeque::new();
        for generator in generators {
            if !seen.contains_key(&generator.table) {
                if elements.len() >= cap {
                    return Err(AutomatonError::MonoidCapExceeded(cap));
                }
                seen.insert(generator.table.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(generator);
            }
        }
        let mut max_index = 1usize;
        let mut failure: Option<usize> = None;
        let mut cursor = 0usize;
        while let Some(id) = queue.pop_front() {
            // test elements as they appear so a witness is found early
            if failure.is_none() {
                while cursor < elements.len() {
                    match idempotent_power_index(&elements[cursor].table, state_count) {
                        Some(m) => max_index = max_index.max(m),
                        None => {
                            failure = Some(cursor);
                            break;
                        }
                    }
                    cursor += 1;
                }
            }
            if failure.is_some() {
                break;
            }
            for column in 0..width {
                let step: Vec<StateId> = (0..state_count).map(|q| minimal.step(q, column)).collect();
                let table = compose(&elements[id].table, &step);
                if !seen.contains_key(&table) {
                    if elements.len() >= cap {
                        return Err(AutomatonError::MonoidCapExceeded(cap));
                    }
                    seen.insert(table.clone(), elements.len());
                    let word = elements[id]
                        .word
                        .concat(&Word::new(vec![minimal.alphabet().get(column)]));
                    queue.push_back(elements.len());
                    elements.push(MonoidElement { table, word });
                }
            }
        }
        // flush any untested elements discovered after the last pop
        if failure.is_none() {
            while cursor < elements.len() {
                match idempotent_power_index(&elements[cursor].table, state_count) {
                    Some(m) => max_index = max_index.max(m),
                    None => {
                        failure = Some(cursor);
                        break;
                    }
                }
                cursor += 1;
            }
        }

        match failure {
            None => Ok(AperiodicityReport {
                aperiodic: true,
                index: Some(max_index),
                witness: None,
                monoid_size: elements.len(),
            }),
            Some(id) => {
                let cycle = nontrivial_cycle(&elements[id].table)
                    .expect("an element without idempotent power permutes a cycle");
                Ok(AperiodicityReport {
                    aperiodic: false,
                    index: None,
                    witness: Some(PermutationWitness {
                        word: elements[id].word.clone(),
                        cycle,
                    }),
                    monoid_size: elements.len(),
                })
            }
        }
    }

    /// Least `n ≥ 1` such that `u v^n w` and `u v^(n+1) w` are
    /// membership-equivalent for all `u, v, w`.
    pub fn aperiodicity_index(&self) -> Result<usize, AutomatonError> {
        let report = self.is_aperiodic()?;
        report.index.ok_or(AutomatonError::NotAperiodic)
    }

    /// Definiteness test: the graph on unordered pairs of distinct states of
    /// the minimal automaton, keeping an edge only when the two successors
    /// differ, must be acyclic. The horizon is the longest path length plus
    /// one.
    pub fn is_definite(&self) -> DefinitenessReport {
        let minimal = self.minimized();
        let n = minimal.state_count();
        let width = minimal.alphabet().len();
        if n <= 1 {
            return DefinitenessReport {
                definite: true,
                horizon: Some(0),
                witness: None,
            };
        }
        let pair_id = |p: StateId, q: StateId| {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            lo * n + hi
        };
        let mut nodes = Vec::new();
        for p in 0..n {
            for q in (p + 1)..n {
                nodes.push((p, q));
            }
        }
        let mut edges: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(p, q) in &nodes {
            let mut targets = Vec::new();
            for column in 0..width {
                let (tp, tq) = (minimal.step(p, column), minimal.step(q, column));
                if tp != tq {
                    targets.push(pair_id(tp, tq));
                }
            }
            edges.insert(pair_id(p, q), targets);
        }

        // depth-first longest path with cycle detection
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Gray,
            Black,
        }
        let mut mark: HashMap<usize, Mark> = nodes.iter().map(|&(p, q)| (pair_id(p, q), Mark::White)).collect();
        let mut longest: HashMap<usize, usize> = HashMap::new();
        let mut cycle: Option<Vec<usize>> = None;

        fn visit(
            node: usize,
            edges: &HashMap<usize, Vec<usize>>,
            mark: &mut HashMap<usize, Mark>,
            longest: &mut HashMap<usize, usize>,
            stack: &mut Vec<usize>,
            cycle: &mut Option<Vec<usize>>,
        ) -> usize {
            match mark[&node] {
                Mark::Black => return longest[&node],
                Mark::Gray => {
                    if cycle.is_none() {
                        let from = stack.iter().position(|&x| x == node).unwrap_or(0);
                        *cycle = Some(stack[from..].to_vec());
                    }
                    return 0;
                }
                Mark::White => {}
            }
            mark.insert(node, Mark::Gray);
            stack.push(node);
            let mut best = 0usize;
            for &next in &edges[&node] {
                best = best.max(1 + visit(next, edges, mark, longest, stack, cycle));
            }
            stack.pop();
            mark.insert(node, Mark::Black);
            longest.insert(node, best);
            best
        }

        let mut max_path = 0usize;
        let mut stack = Vec::new();
        for &(p, q) in &nodes {
            max_path = max_path.max(visit(
                pair_id(p, q),
                &edges,
                &mut mark,
                &mut longest,
                &mut stack,
                &mut cycle,
            ));
            if cycle.is_some() {
                break;
            }
        }

        match cycle {
            Some(pair_ids) => DefinitenessReport {
                definite: false,
                horizon: None,
                witness: Some(pair_ids.iter().map(|&id| (id / n, id % n)).collect()),
            },
            None => DefinitenessReport {
                definite: true,
                horizon: Some(max_path + 1),
                witness: None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    fn one_plus_zero_star() -> Dfa {
        // 0 start, 1 ones, 2 ones-then-zeros, 3 sink over {0,1}
        Dfa::new(
            Alphabet::digits(1),
            vec![vec![3, 1], vec![2, 1], vec![2, 3], vec![3, 3]],
            0,
            [1, 2],
        )
        .unwrap()
    }

    fn even_ones_base3() -> Dfa {
        // words over {0,1,2} with an even number of 1s
        Dfa::new(
            Alphabet::digits(2),
            vec![vec![0, 1, 0], vec![1, 0, 1]],
            0,
            [0],
        )
        .unwrap()
    }

    #[test]
    fn one_plus_zero_star_is_aperiodic() {
        let report = one_plus_zero_star().is_aperiodic().unwrap();
        assert!(report.aperiodic);
        assert!(report.witness.is_none());
        assert!(report.index.is_some());
    }

    #[test]
    fn even_ones_has_witness_on_letter_one() {
        let report = even_ones_base3().is_aperiodic().unwrap();
        assert!(!report.aperiodic);
        let witness = report.witness.unwrap();
        assert_eq!(witness.word, Word::from_digits(&[1]));
        assert_eq!(witness.cycle.len(), 2);
    }

    #[test]
    fn universal_has_index_one() {
        let dfa = Dfa::universal(Alphabet::digits(1));
        let report = dfa.is_aperiodic().unwrap();
        assert!(report.aperiodic);
        assert_eq!(report.index, Some(1));
        assert_eq!(dfa.aperiodicity_index().unwrap(), 1);
    }

    #[test]
    fn double_ones_even_zeros_not_aperiodic() {
        // 11(00)*: pumping 0s flips membership
        let dfa = Dfa::from_word_set(
            Alphabet::digits(1),
            &[Word::from_digits(&[1, 1])],
        )
        .unwrap();
        let zeros = Dfa::new(
            Alphabet::digits(1),
            vec![vec![1, 2], vec![0, 2], vec![2, 2]],
            0,
            [0],
        )
        .unwrap(); // (00)*
        let lang = dfa.concat(&zeros).unwrap();
        let report = lang.is_aperiodic().unwrap();
        assert!(!report.aperiodic);
        assert_eq!(report.witness.unwrap().word, Word::from_digits(&[0]));
    }

    #[test]
    fn witness_permutes_the_cycle() {
        let report = even_ones_base3().is_aperiodic().unwrap();
        let witness = report.witness.unwrap();
        let minimal = even_ones_base3().minimized();
        for (i, &state) in witness.cycle.iter().enumerate() {
            let target = witness.cycle[(i + 1) % witness.cycle.len()];
            assert_eq!(minimal.run_from(state, &witness.word), target);
        }
    }

    #[test]
    fn monoid_cap_is_enforced() {
        let err = even_ones_base3().is_aperiodic_capped(1).unwrap_err();
        assert_eq!(err, AutomatonError::MonoidCapExceeded(1));
    }

    #[test]
    fn index_satisfies_the_pumping_property() {
        // exhaustive u v^n w ⇔ u v^(n+1) w for short factors
        let ends_in_zero = Dfa::new(
            Alphabet::digits(1),
            vec![vec![1, 0], vec![1, 0]],
            0,
            [1],
        )
        .unwrap();
        for dfa in [one_plus_zero_star(), ends_in_zero] {
            let index = dfa.aperiodicity_index().unwrap();
            let words: Vec<Word> = (0..=3)
                .flat_map(|len| Dfa::words_of_length(dfa.alphabet(), len).collect::<Vec<_>>())
                .collect();
            for u in &words {
                for v in &words {
                    for tail in &words {
                        let pumped = u.concat(&v.repeat(index)).concat(tail);
                        let more = u.concat(&v.repeat(index + 1)).concat(tail);
                        assert_eq!(
                            dfa.accepts(&pumped),
                            dfa.accepts(&more),
                            "u={u} v={v} w={tail}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn not_aperiodic_has_no_index() {
        assert_eq!(
            even_ones_base3().aperiodicity_index().unwrap_err(),
            AutomatonError::NotAperiodic
        );
    }

    #[test]
    fn definiteness_of_last_letter_language() {
        // words ending in 0, plus the empty word, over {0,..,5}
        let dfa = Dfa::new(
            Alphabet::digits(5),
            vec![
                vec![0, 1, 1, 1, 1, 1],
                vec![0, 1, 1, 1, 1, 1],
            ],
            0,
            [0],
        )
        .unwrap();
        let report = dfa.is_definite();
        assert!(report.definite);
        assert_eq!(report.horizon, Some(1));
    }

    #[test]
    fn even_ones_is_not_definite() {
        let report = even_ones_base3().is_definite();
        assert!(!report.definite);
        assert!(!report.witness.unwrap().is_empty());
    }

    #[test]
    fn definite_horizon_bounds_suffix_dependence() {
        // membership depends on the last two letters: words ending in 10
        let dfa = Dfa::new(
            Alphabet::digits(1),
            vec![
                vec![0, 1],
                vec![2, 1],
                vec![0, 1],
            ],
            0,
            [2],
        )
        .unwrap();
        let report = dfa.is_definite();
        assert!(report.definite);
        let k = report.horizon.unwrap();
        assert_eq!(k, 2);
        let minimal = dfa.minimized();
        for w in Dfa::words_of_length(dfa.alphabet(), k) {
            let mut landed = std::collections::BTreeSet::new();
            for q in 0..minimal.state_count() {
                landed.insert(minimal.run_from(q, &w));
            }
            assert_eq!(landed.len(), 1, "all runs collapse after {k} letters");
        }
    }
}
