//! Seeded generators for the randomized verdict batteries.
//!
//! Everything here is deterministic in the seed, so batteries reproduce
//! bit-for-bit across runs and platforms.

use std::collections::BTreeSet;

use crate::automata::{Alphabet, Dfa};
use crate::setspec::UpSet;

/// Small deterministic generator (splitmix64).
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        self.next_u64() % bound
    }

    pub fn chance(&mut self, numerator: u64, denominator: u64) -> bool {
        self.below(denominator) < numerator
    }
}

/// A random complete DFA with up to `max_states` states over `{0..letters-1}`.
pub fn random_dfa(rng: &mut Rng, max_states: usize, letters: u32) -> Dfa {
    let states = 1 + rng.below(max_states as u64) as usize;
    let alphabet = Alphabet::digits(letters - 1);
    let transitions = (0..states)
        .map(|_| {
            (0..alphabet.len())
                .map(|_| rng.below(states as u64) as usize)
                .collect()
        })
        .collect();
    let accepting: Vec<usize> = (0..states).filter(|_| rng.chance(1, 2)).collect();
    Dfa::new(alphabet, transitions, 0, accepting).expect("random table is well-formed")
}

/// A random ultimately periodic set with period in `2..=max_period`.
pub fn random_up_set(rng: &mut Rng, max_period: u64) -> UpSet {
    let period = 2 + rng.below(max_period - 1);
    let mut residues = BTreeSet::new();
    for r in 0..period {
        if rng.chance(1, 2) {
            residues.insert(r);
        }
    }
    if residues.is_empty() {
        residues.insert(rng.below(period));
    }
    let threshold = rng.below(16);
    let mut include = BTreeSet::new();
    let mut exclude = BTreeSet::new();
    for n in 0..threshold {
        match rng.below(4) {
            0 => {
                include.insert(n);
            }
            1 => {
                exclude.insert(n);
            }
            _ => {}
        }
    }
    UpSet::new(include, exclude, threshold, period, residues).expect("generated data is coherent")
}

/// The named progressions exercised throughout the verdict batteries.
pub fn named_up_specs() -> Vec<(&'static str, UpSet)> {
    vec![
        ("even", UpSet::progression(0, 2).expect("valid")),
        ("4n+1", UpSet::progression(1, 4).expect("valid")),
        ("6n", UpSet::progression(0, 6).expect("valid")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rng_is_deterministic() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn random_dfas_respect_bounds() {
        let mut rng = Rng::new(7);
        for _ in 0..50 {
            let dfa = random_dfa(&mut rng, 6, 3);
            assert!(dfa.state_count() <= 6);
            assert_eq!(dfa.alphabet().len(), 3);
        }
    }

    #[test]
    fn random_up_sets_are_valid() {
        let mut rng = Rng::new(11);
        for _ in 0..50 {
            let spec = random_up_set(&mut rng, 12);
            assert!(spec.period >= 2);
            assert!(!spec.residues.is_empty());
        }
    }
}
