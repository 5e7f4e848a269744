//! Numeration systems and digit representations.
//!
//! A system owns a strictly increasing basis sequence starting at 1: powers of
//! an integer base, a linear recurrence (e.g. the Fibonacci system `U_0 = 1`,
//! `U_1 = 2`, `U_{n+2} = U_{n+1} + U_n`), or the zero-free bijective base.
//! Greedy systems represent `n` most-significant digit first by repeatedly
//! subtracting the largest fitting basis element; bijective systems use the
//! digit recurrence `d = ((n-1) mod p) + 1`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{Alphabet, AutomatonError, Dfa, Word};

/// Arbitrary-precision natural number used for all numeric values.
pub type Nat = BigUint;

/// How many basis terms are generated up front to pin down the digit bound.
const BOUND_HORIZON: usize = 64;

#[derive(Debug, Error)]
pub enum NumerationError {
    #[error("invalid numeration system: {0}")]
    InvalidSystem(String),

    #[error("operation not defined for this kind of numeration system")]
    KindMismatch,

    #[error("digit {digit} outside the alphabet bound {max}")]
    DigitOutOfRange { digit: u32, max: u32 },

    #[error("no canonical-form automaton is known for this system")]
    CanonicalFormUnknown,

    #[error("supplied canonical-form automaton is wrong: {0}")]
    CanonicalFormInvalid(String),

    #[error("root finding did not converge")]
    ConvergenceFailure,

    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// The three supported families of systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemKind {
    /// Positional base `k ≥ 2`, basis `k^n`.
    PositionalBase(u32),
    /// Strictly increasing solution of `U_{n+k} = c_{k-1} U_{n+k-1} + … + c_0 U_n`,
    /// coefficients listed `c_{k-1}, …, c_0`, with `U_0 = 1`.
    LinearRecurrence { coeffs: Vec<i64>, initial: Vec<u64> },
    /// Bijective base `p ≥ 2` over digits `{1, …, p}`; no zero digit.
    BijectiveBase(u32),
}

/// A numeration system together with its lazily extended basis cache.
///
/// The cache is internally synchronized; concurrent read-only use is safe.
/// For contention-free parallel batches, pre-generate the basis with
/// [`NumerationSystem::ensure_basis`] first.
#[derive(Debug)]
pub struct NumerationSystem {
    kind: SystemKind,
    basis: Mutex<Vec<Nat>>,
    /// Largest digit of the representation alphabet.
    max_digit: u32,
    /// User-supplied canonical-form automaton for non-built-in recurrences.
    canonical_override: Option<Dfa>,
}

impl NumerationSystem {
    pub fn base(k: u32) -> Result<Self, NumerationError> {
        if k < 2 {
            return Err(NumerationError::InvalidSystem(format!("base {k} < 2")));
        }
        Ok(NumerationSystem {
            kind: SystemKind::PositionalBase(k),
            basis: Mutex::new(vec![Nat::one()]),
            max_digit: k - 1,
            canonical_override: None,
        })
    }

    pub fn bijective(p: u32) -> Result<Self, NumerationError> {
        if p < 2 {
            return Err(NumerationError::InvalidSystem(format!(
                "bijective base {p} < 2"
            )));
        }
        Ok(NumerationSystem {
            kind: SystemKind::BijectiveBase(p),
            basis: Mutex::new(vec![Nat::one()]),
            max_digit: p,
            canonical_override: None,
        })
    }

    pub fn fibonacci() -> Self {
        NumerationSystem::linear(vec![1, 1], vec![1, 2], None)
            .expect("the Fibonacci system is valid")
    }

    /// Linear-recurrence system; `canonical` supplies the canonical-form
    /// automaton for systems that are not built in.
    pub fn linear(
        coeffs: Vec<i64>,
        initial: Vec<u64>,
        canonical: Option<Dfa>,
    ) -> Result<Self, NumerationError> {
        if coeffs.is_empty() || coeffs.len() != initial.len() {
            return Err(NumerationError::InvalidSystem(
                "recurrence order and initial-value count must match and be positive".into(),
            ));
        }
        if *coeffs.last().unwrap() == 0 {
            return Err(NumerationError::InvalidSystem("c_0 must be nonzero".into()));
        }
        if initial[0] != 1 {
            return Err(NumerationError::InvalidSystem("U_0 must be 1".into()));
        }
        for pair in initial.windows(2) {
            if pair[0] >= pair[1] {
                return Err(NumerationError::InvalidSystem(
                    "initial values must be strictly increasing".into(),
                ));
            }
        }
        let basis: Vec<Nat> = initial.iter().map(|&u| Nat::from(u)).collect();
        let mut system = NumerationSystem {
            kind: SystemKind::LinearRecurrence { coeffs, initial },
            basis: Mutex::new(basis),
            max_digit: 0,
            canonical_override: canonical,
        };
        system.ensure_basis(BOUND_HORIZON)?;
        // the greedy digit at any position is at most ⌊(U_{n+1} - 1) / U_n⌋
        let mut bound = 0u32;
        {
            let cache = system.basis.lock().unwrap();
            for pair in cache.windows(2) {
                let q = (&pair[1] - 1u32) / &pair[0];
                bound = bound.max(q.to_u32().ok_or_else(|| {
                    NumerationError::InvalidSystem("digit bound overflows u32".into())
                })?);
            }
        }
        system.max_digit = bound;
        Ok(system)
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn is_greedy(&self) -> bool {
        !matches!(self.kind, SystemKind::BijectiveBase(_))
    }

    /// Largest digit of the representation alphabet.
    pub fn max_digit(&self) -> u32 {
        self.max_digit
    }

    /// The representation alphabet: `{0..c}` for greedy kinds, `{1..p}` for
    /// bijective.
    pub fn digit_alphabet(&self) -> Alphabet {
        match self.kind {
            SystemKind::BijectiveBase(p) => Alphabet::digit_range(1, p),
            _ => Alphabet::digits(self.max_digit),
        }
    }

    /// Extend the basis cache to at least `len` terms, revalidating growth.
    pub fn ensure_basis(&self, len: usize) -> Result<(), NumerationError> {
        let mut cache = self.basis.lock().unwrap();
        while cache.len() < len {
            let next = match &self.kind {
                SystemKind::PositionalBase(k) => cache.last().unwrap() * *k,
                SystemKind::BijectiveBase(p) => cache.last().unwrap() * *p,
                SystemKind::LinearRecurrence { coeffs, .. } => {
                    let mut acc = BigInt::zero();
                    for (offset, &c) in coeffs.iter().enumerate() {
                        // coeffs[0] = c_{k-1} multiplies the newest term
                        let term = &cache[cache.len() - 1 - offset];
                        acc += BigInt::from(c) * BigInt::from(term.clone());
                    }
                    if acc.is_negative() || acc.is_zero() {
                        return Err(NumerationError::InvalidSystem(
                            "recurrence produced a non-positive term".into(),
                        ));
                    }
                    acc.to_biguint().unwrap()
                }
            };
            if next <= *cache.last().unwrap() {
                return Err(NumerationError::InvalidSystem(
                    "basis is not strictly increasing".into(),
                ));
            }
            if self.max_digit > 0 {
                let q = (&next - 1u32) / cache.last().unwrap();
                if q.to_u32().is_none_or(|q| q > self.max_digit) {
                    return Err(NumerationError::InvalidSystem(
                        "basis ratio exceeds the established digit bound".into(),
                    ));
                }
            }
            cache.push(next);
        }
        Ok(())
    }

    /// `U_i`.
    pub fn basis(&self, i: usize) -> Result<Nat, NumerationError> {
        self.ensure_basis(i + 1)?;
        Ok(self.basis.lock().unwrap()[i].clone())
    }

    /// Index of `x` in the basis sequence, if `x` is a basis element.
    pub fn basis_index_of(&self, x: &Nat) -> Result<Option<usize>, NumerationError> {
        if x.is_zero() {
            return Ok(None);
        }
        loop {
            {
                let cache = self.basis.lock().unwrap();
                if cache.last().unwrap() >= x {
                    return Ok(cache.binary_search(x).ok());
                }
            }
            let grown = self.basis.lock().unwrap().len() + 16;
            self.ensure_basis(grown)?;
        }
    }

    /// Greedy digits of `n`, most-significant first (`ρ_U`); `ρ_U(0) = ε`.
    pub fn greedy_repr(&self, n: &Nat) -> Result<Word, NumerationError> {
        if !self.is_greedy() {
            return Err(NumerationError::KindMismatch);
        }
        if n.is_zero() {
            return Ok(Word::empty());
        }
        // find the largest U_i ≤ n
        let top = loop {
            {
                let cache = self.basis.lock().unwrap();
                if cache.last().unwrap() > n {
                    break match cache.binary_search(n) {
                        Ok(i) => i,
                        Err(i) => i - 1,
                    };
                }
            }
            let grown = self.basis.lock().unwrap().len() + 16;
            self.ensure_basis(grown)?;
        };
        let cache = self.basis.lock().unwrap();
        let mut rem = n.clone();
        let mut digits = Vec::with_capacity(top + 1);
        for i in (0..=top).rev() {
            let (d, r) = rem.div_rem(&cache[i]);
            let digit = d.to_u32().expect("greedy digit fits u32");
            debug_assert!(digit <= self.max_digit);
            digits.push(digit);
            rem = r;
        }
        debug_assert!(rem.is_zero());
        Ok(Word::from_digits(&digits))
    }

    /// Numerical value `Σ w_i · U_i`, position 0 being the rightmost letter.
    /// Canonical form is not required, but digits must fit the alphabet.
    pub fn value(&self, word: &Word) -> Result<Nat, NumerationError> {
        let digits = word
            .digits()
            .ok_or_else(|| NumerationError::InvalidSystem("pair letters have no value".into()))?;
        let (lo, hi) = match self.kind {
            SystemKind::BijectiveBase(p) => (1, p),
            _ => (0, self.max_digit),
        };
        self.ensure_basis(digits.len().max(1))?;
        let cache = self.basis.lock().unwrap();
        let mut total = Nat::zero();
        for (position, &digit) in digits.iter().rev().enumerate() {
            if digit < lo || digit > hi {
                return Err(NumerationError::DigitOutOfRange { digit, max: hi });
            }
            total += &cache[position] * digit;
        }
        Ok(total)
    }

    /// The unique zero-free word over `{1..p}` with value `n`.
    pub fn bijective_repr(&self, n: &Nat) -> Result<Word, NumerationError> {
        let SystemKind::BijectiveBase(p) = self.kind else {
            return Err(NumerationError::KindMismatch);
        };
        let mut rem = n.clone();
        let mut digits = Vec::new();
        while !rem.is_zero() {
            let d = ((&rem - 1u32) % p)
                .to_u32()
                .expect("digit below p fits u32")
                + 1;
            digits.push(d);
            rem = (rem - d) / p;
        }
        digits.reverse();
        Ok(Word::from_digits(&digits))
    }

    /// `V_U(x)`: the largest basis element carrying a nonzero greedy digit;
    /// `V_U(0) = U_0 = 1`.
    pub fn leading_term(&self, x: &Nat) -> Result<Nat, NumerationError> {
        let repr = self.greedy_repr(x)?;
        if repr.is_empty() {
            return Ok(Nat::one());
        }
        self.basis(repr.len() - 1)
    }

    /// `ε_{j,U}(x, y)`: `y` is a basis element whose greedy digit in `x`
    /// equals `j`.
    pub fn epsilon(&self, x: &Nat, y: &Nat, j: u32) -> Result<bool, NumerationError> {
        if !self.is_greedy() {
            return Err(NumerationError::KindMismatch);
        }
        if j < 1 || j > self.max_digit {
            return Err(NumerationError::DigitOutOfRange {
                digit: j,
                max: self.max_digit,
            });
        }
        let Some(index) = self.basis_index_of(y)? else {
            return Ok(false);
        };
        let repr = self.greedy_repr(x)?;
        let digits = repr.digits().expect("greedy words are digit words");
        if index >= digits.len() {
            return Ok(false);
        }
        Ok(digits[digits.len() - 1 - index] == j)
    }

    /// Automaton of the canonical forms `𝒩_U = 0* ρ_U(ℕ)`.
    ///
    /// Positional bases accept everything; the Fibonacci system accepts the
    /// words avoiding the factor `11`; any other recurrence needs a supplied
    /// automaton, which is validated empirically before being trusted.
    pub fn canonical_dfa(&self) -> Result<Dfa, NumerationError> {
        match &self.kind {
            SystemKind::BijectiveBase(_) => Err(NumerationError::KindMismatch),
            SystemKind::PositionalBase(k) => Ok(Dfa::universal(Alphabet::digits(k - 1))),
            SystemKind::LinearRecurrence { coeffs, initial } => {
                if coeffs == &[1, 1] && initial == &[1, 2] {
                    // words over {0,1} with no factor 11
                    return Ok(Dfa::new(
                        Alphabet::digits(1),
                        vec![vec![0, 1], vec![0, 2], vec![2, 2]],
                        0,
                        [0, 1],
                    )?);
                }
                let supplied = self
                    .canonical_override
                    .clone()
                    .ok_or(NumerationError::CanonicalFormUnknown)?;
                self.validate_canonical(&supplied)?;
                Ok(supplied)
            }
        }
    }

    fn validate_canonical(&self, dfa: &Dfa) -> Result<(), NumerationError> {
        if *dfa.alphabet() != self.digit_alphabet() {
            return Err(NumerationError::CanonicalFormInvalid(
                "alphabet differs from the representation alphabet".into(),
            ));
        }
        for n in 0u64..=10_000 {
            let repr = self.greedy_repr(&Nat::from(n))?;
            let padded = Word::from_digits(&[0]).concat(&repr);
            if !dfa.accepts(&repr) || !dfa.accepts(&padded) {
                return Err(NumerationError::CanonicalFormInvalid(format!(
                    "rejects the padded representation of {n}"
                )));
            }
        }
        // short-word sweep: acceptance must coincide with canonicity
        let alphabet = self.digit_alphabet();
        let mut max_len = 0usize;
        while alphabet.len().pow(max_len as u32 + 1) <= 20_000 {
            max_len += 1;
        }
        for len in 0..=max_len {
            for word in Dfa::words_of_length(&alphabet, len) {
                let value = self.value(&word)?;
                let canonical = self.greedy_repr(&value)?;
                let stripped: Vec<u32> = word
                    .digits()
                    .unwrap()
                    .into_iter()
                    .skip_while(|&d| d == 0)
                    .collect();
                let is_canonical = Word::from_digits(&stripped) == canonical;
                if dfa.accepts(&word) != is_canonical {
                    return Err(NumerationError::CanonicalFormInvalid(format!(
                        "disagrees on word {word}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Recognizer of `{w ∈ 𝒩_U : π_U(w) ≡ r (mod m)}`.
    ///
    /// Built least-significant digit first, where tracking `U_i mod m` is
    /// finite-state, intersected with the canonical form and reversed back to
    /// the most-significant-first convention.
    pub fn residue_dfa(&self, m: u64, r: u64) -> Result<Dfa, NumerationError> {
        if !self.is_greedy() {
            return Err(NumerationError::KindMismatch);
        }
        if m == 0 || r >= m {
            return Err(NumerationError::InvalidSystem(format!(
                "residue {r} modulo {m} is not a residue class"
            )));
        }
        let order = match &self.kind {
            SystemKind::PositionalBase(_) => 1,
            SystemKind::LinearRecurrence { coeffs, .. } => coeffs.len(),
            SystemKind::BijectiveBase(_) => unreachable!(),
        };
        // U_i mod m is ultimately periodic; detect the cycle on windows of
        // recurrence-order length
        let mut mods: Vec<u64> = Vec::new();
        let mut first_seen: HashMap<Vec<u64>, usize> = HashMap::new();
        let (preperiod, period) = loop {
            self.ensure_basis(mods.len() + order)?;
            {
                let cache = self.basis.lock().unwrap();
                while mods.len() < cache.len() {
                    mods.push((&cache[mods.len()] % m).to_u64().unwrap());
                }
            }
            let start = mods.len() - order;
            let window = mods[start..].to_vec();
            if let Some(&first) = first_seen.get(&window) {
                break (first, start - first);
            }
            first_seen.insert(window, start);
            self.ensure_basis(mods.len() + 1)?;
        };
        let phase_count = preperiod + period;
        let m_us = m as usize;
        let alphabet = self.digit_alphabet();
        let width = alphabet.len();
        let state_of = |phase: usize, sum: usize| phase * m_us + sum;
        let mut transitions = vec![vec![0usize; width]; phase_count * m_us];
        for phase in 0..phase_count {
            let next_phase = if phase + 1 < phase_count {
                phase + 1
            } else {
                preperiod
            };
            let weight = mods[phase];
            for sum in 0..m_us {
                for (column, symbol) in alphabet.iter().enumerate() {
                    let digit = symbol.digit().unwrap() as u64;
                    let next_sum = ((sum as u64 + digit * weight) % m) as usize;
                    transitions[state_of(phase, sum)][column] = state_of(next_phase, next_sum);
                }
            }
        }
        let lsd = Dfa::new(
            alphabet,
            transitions,
            state_of(0, 0),
            (0..phase_count).map(|phase| state_of(phase, r as usize)),
        )?;
        let canonical_lsd = self.canonical_dfa()?.reverse();
        let combined = lsd.intersection(&canonical_lsd)?;
        Ok(combined.reverse().minimized())
    }
}

/// Verdict of the numeric dominant-root check on a linear recurrence.
#[derive(Debug, Clone, Serialize)]
pub struct PisotVerdict {
    pub is_pisot_like: bool,
    /// Real part of the root of largest modulus.
    pub dominant_root: f64,
    /// Moduli of the remaining roots.
    pub other_root_moduli: Vec<f64>,
    pub tolerance: f64,
}

/// Default separation margin for the root-modulus comparisons.
pub const PISOT_TOLERANCE: f64 = 1e-6;

/// Numerically approximate the roots of `x^k - c_{k-1} x^{k-1} - … - c_0` and
/// report whether exactly one root exceeds 1 while all others stay strictly
/// inside the unit circle. Advisory: irreducibility is not checked.
pub fn pisot_check(coeffs: &[i64]) -> Result<PisotVerdict, NumerationError> {
    pisot_check_with_tolerance(coeffs, PISOT_TOLERANCE)
}

pub fn pisot_check_with_tolerance(
    coeffs: &[i64],
    tolerance: f64,
) -> Result<PisotVerdict, NumerationError> {
    if coeffs.is_empty() {
        return Err(NumerationError::InvalidSystem(
            "characteristic polynomial needs degree ≥ 1".into(),
        ));
    }
    if *coeffs.last().unwrap() == 0 {
        return Err(NumerationError::InvalidSystem("c_0 must be nonzero".into()));
    }
    let degree = coeffs.len();
    // monic coefficients in power order: -c_0, …, -c_{k-1}, 1
    let mut poly: Vec<Complex64> = coeffs
        .iter()
        .rev()
        .map(|&c| Complex64::new(-(c as f64), 0.0))
        .collect();
    poly.push(Complex64::new(1.0, 0.0));
    let eval = |z: Complex64| {
        poly.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };

    // simultaneous (Durand–Kerner) iteration
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|i| seed.powu(i as u32 + 1)).collect();
    let mut converged = false;
    for _ in 0..10_000 {
        let snapshot = roots.clone();
        let mut shift = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &other) in snapshot.iter().enumerate() {
                if j != i {
                    denom *= snapshot[i] - other;
                }
            }
            let delta = eval(snapshot[i]) / denom;
            roots[i] = snapshot[i] - delta;
            shift = shift.max(delta.norm());
        }
        let residual = roots.iter().map(|&z| eval(z).norm()).fold(0.0, f64::max);
        if residual < 1e-10 && shift < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumerationError::ConvergenceFailure);
    }

    roots.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    let dominant = roots[0];
    let others: Vec<f64> = roots[1..].iter().map(|z| z.norm()).collect();
    let is_pisot_like = dominant.im.abs() < tolerance
        && dominant.re > 1.0 + tolerance
        && others.iter().all(|&modulus| modulus < 1.0 - tolerance);
    Ok(PisotVerdict {
        is_pisot_like,
        dominant_root: dominant.re,
        other_root_moduli: others,
        tolerance,
    })
}

/// Serializable system description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SystemConfig {
    Base {
        k: u32,
    },
    Linear {
        coeffs: Vec<i64>,
        initial: Vec<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        canonical_dfa: Option<String>,
    },
    Bijective {
        p: u32,
    },
}

impl SystemConfig {
    /// Build the system; `canonical` must carry the automaton loaded from the
    /// `canonical_dfa` path when one is named.
    pub fn build(&self, canonical: Option<Dfa>) -> Result<NumerationSystem, NumerationError> {
        match self {
            SystemConfig::Base { k } => NumerationSystem::base(*k),
            SystemConfig::Bijective { p } => NumerationSystem::bijective(*p),
            SystemConfig::Linear { coeffs, initial, .. } => {
                NumerationSystem::linear(coeffs.clone(), initial.clone(), canonical)
            }
        }
    }

    pub fn canonical_dfa_path(&self) -> Option<&str> {
        match self {
            SystemConfig::Linear { canonical_dfa, .. } => canonical_dfa.as_deref(),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    #[test]
    fn fibonacci_basis_values() {
        let fib = NumerationSystem::fibonacci();
        let expect = [1u64, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        for (i, &u) in expect.iter().enumerate() {
            assert_eq!(fib.basis(i).unwrap(), nat(u));
        }
        assert_eq!(fib.max_digit(), 1);
    }

    #[test]
    fn positional_and_bijective_basis() {
        assert_eq!(NumerationSystem::base(2).unwrap().basis(6).unwrap(), nat(64));
        assert_eq!(NumerationSystem::bijective(2).unwrap().basis(3).unwrap(), nat(8));
    }

    #[test]
    fn greedy_repr_of_74_base_2() {
        let base2 = NumerationSystem::base(2).unwrap();
        assert_eq!(base2.greedy_repr(&nat(74)).unwrap().to_string(), "1001010");
        assert_eq!(base2.greedy_repr(&nat(0)).unwrap(), Word::empty());
    }

    #[test]
    fn greedy_repr_fibonacci() {
        let fib = NumerationSystem::fibonacci();
        assert_eq!(fib.greedy_repr(&nat(4)).unwrap().to_string(), "101");
        assert_eq!(fib.value(&Word::parse_digits("10101").unwrap()).unwrap(), nat(12));
    }

    #[test]
    fn value_of_binary_and_bijective_words() {
        let base2 = NumerationSystem::base(2).unwrap();
        assert_eq!(base2.value(&Word::parse_digits("1001").unwrap()).unwrap(), nat(9));
        let adic2 = NumerationSystem::bijective(2).unwrap();
        assert_eq!(adic2.value(&Word::parse_digits("121").unwrap()).unwrap(), nat(9));
    }

    #[test]
    fn bijective_repr_digit_recurrence() {
        let adic2 = NumerationSystem::bijective(2).unwrap();
        assert_eq!(adic2.bijective_repr(&nat(9)).unwrap().to_string(), "121");
        assert_eq!(adic2.bijective_repr(&nat(2)).unwrap().to_string(), "2");
        assert_eq!(adic2.bijective_repr(&nat(0)).unwrap(), Word::empty());
        let adic3 = NumerationSystem::bijective(3).unwrap();
        for n in 0u64..=10_000 {
            let repr = adic3.bijective_repr(&nat(n)).unwrap();
            assert_eq!(adic3.value(&repr).unwrap(), nat(n));
            assert!(repr.digits().unwrap().iter().all(|&d| (1..=3).contains(&d)));
        }
    }

    #[test]
    fn digit_out_of_range_is_reported() {
        let base2 = NumerationSystem::base(2).unwrap();
        let err = base2.value(&Word::parse_digits("121").unwrap()).unwrap_err();
        assert!(matches!(err, NumerationError::DigitOutOfRange { digit: 2, max: 1 }));
        let adic2 = NumerationSystem::bijective(2).unwrap();
        let err = adic2.value(&Word::parse_digits("101").unwrap()).unwrap_err();
        assert!(matches!(err, NumerationError::DigitOutOfRange { digit: 0, .. }));
    }

    #[test]
    fn leading_term_examples() {
        let base2 = NumerationSystem::base(2).unwrap();
        assert_eq!(base2.leading_term(&nat(74)).unwrap(), nat(64));
        assert_eq!(base2.leading_term(&nat(0)).unwrap(), nat(1));
        for x in 1u64..=256 {
            let fixed = base2.leading_term(&nat(x)).unwrap() == nat(x);
            assert_eq!(fixed, x.is_power_of_two(), "x = {x}");
        }
    }

    #[test]
    fn epsilon_relation_on_74() {
        let base2 = NumerationSystem::base(2).unwrap();
        assert!(base2.epsilon(&nat(74), &nat(8), 1).unwrap());
        assert!(!base2.epsilon(&nat(74), &nat(16), 1).unwrap());
        assert!(!base2.epsilon(&nat(74), &nat(31), 1).unwrap());
    }

    #[test]
    fn epsilon_decomposition_identity_fibonacci() {
        // x = Σ_j Σ_{ε_{j,U}(x,y)} j·y
        let fib = NumerationSystem::fibonacci();
        for x in 0u64..=2_000 {
            let mut total = Nat::zero();
            let repr = fib.greedy_repr(&nat(x)).unwrap();
            for (i, &d) in repr.digits().unwrap().iter().rev().enumerate() {
                if d > 0 {
                    let y = fib.basis(i).unwrap();
                    assert!(fib.epsilon(&nat(x), &y, d).unwrap());
                    total += y * d;
                }
            }
            assert_eq!(total, nat(x));
        }
    }

    #[test]
    fn canonical_dfa_base_4_accepts_everything() {
        let base4 = NumerationSystem::base(4).unwrap();
        let dfa = base4.canonical_dfa().unwrap();
        for word in ["", "0", "3210", "333"] {
            assert!(dfa.accepts(&Word::parse_digits(word).unwrap()));
        }
    }

    #[test]
    fn canonical_dfa_fibonacci_avoids_11() {
        let fib = NumerationSystem::fibonacci();
        let dfa = fib.canonical_dfa().unwrap();
        assert!(!dfa.accepts(&Word::parse_digits("0110").unwrap()));
        assert!(dfa.accepts(&Word::parse_digits("0101").unwrap()));
        assert!(dfa.is_aperiodic().unwrap().aperiodic);
        // matches the greedy language
        for n in 0u64..=5_000 {
            assert!(dfa.accepts(&fib.greedy_repr(&nat(n)).unwrap()));
        }
    }

    #[test]
    fn canonical_dfa_for_unknown_recurrence_needs_supply() {
        // U_{n+1} = 3 U_n as a plain recurrence: not built in
        let system = NumerationSystem::linear(vec![3], vec![1], None).unwrap();
        assert!(matches!(
            system.canonical_dfa().unwrap_err(),
            NumerationError::CanonicalFormUnknown
        ));
        // the universal automaton over {0,1,2} is the correct canonical form
        let supplied = Dfa::universal(Alphabet::digits(2));
        let system = NumerationSystem::linear(vec![3], vec![1], Some(supplied)).unwrap();
        assert!(system.canonical_dfa().is_ok());
        // a wrong automaton is rejected
        let wrong = Dfa::empty(Alphabet::digits(2));
        let system = NumerationSystem::linear(vec![3], vec![1], Some(wrong)).unwrap();
        assert!(matches!(
            system.canonical_dfa().unwrap_err(),
            NumerationError::CanonicalFormInvalid(_)
        ));
    }

    #[test]
    fn residue_base2_even_is_aperiodic() {
        let base2 = NumerationSystem::base(2).unwrap();
        let even = base2.residue_dfa(2, 0).unwrap();
        // 0* ∪ Σ*0
        for (word, expect) in [("", true), ("0", true), ("10", true), ("1", false), ("1001", false)] {
            assert_eq!(even.accepts(&Word::parse_digits(word).unwrap()), expect);
        }
        assert!(even.is_aperiodic().unwrap().aperiodic);
    }

    #[test]
    fn residue_base3_even_counts_ones() {
        let base3 = NumerationSystem::base(3).unwrap();
        let even = base3.residue_dfa(2, 0).unwrap();
        for len in 0..=6 {
            for word in Dfa::words_of_length(&Alphabet::digits(2), len) {
                let ones = word.digits().unwrap().iter().filter(|&&d| d == 1).count();
                assert_eq!(even.accepts(&word), ones % 2 == 0, "word {word}");
            }
        }
        assert!(!even.is_aperiodic().unwrap().aperiodic);
    }

    #[test]
    fn residue_fibonacci_even_not_aperiodic() {
        let fib = NumerationSystem::fibonacci();
        let even = fib.residue_dfa(2, 0).unwrap();
        assert!(!even.is_aperiodic().unwrap().aperiodic);
    }

    #[test]
    fn residue_membership_matches_arithmetic() {
        for k in 2u32..=6 {
            let system = NumerationSystem::base(k).unwrap();
            for m in 2u64..=6 {
                for r in [0, m - 1] {
                    let dfa = system.residue_dfa(m, r).unwrap();
                    for n in 0u64..=10_000 {
                        let repr = system.greedy_repr(&nat(n)).unwrap();
                        assert_eq!(dfa.accepts(&repr), n % m == r, "base {k}, n ≡ {r} mod {m}, n {n}");
                    }
                }
            }
        }
        let fib = NumerationSystem::fibonacci();
        for m in [2u64, 3] {
            let dfa = fib.residue_dfa(m, 0).unwrap();
            for n in 0u64..=10_000 {
                let repr = fib.greedy_repr(&nat(n)).unwrap();
                assert_eq!(dfa.accepts(&repr), n % m == 0, "fibonacci mod {m}, n {n}");
            }
        }
    }

    #[test]
    fn pisot_check_fibonacci_and_base4() {
        let verdict = pisot_check(&[1, 1]).unwrap();
        assert!(verdict.is_pisot_like);
        assert!((verdict.dominant_root - (1.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-8);
        let verdict = pisot_check(&[4]).unwrap();
        assert!(verdict.is_pisot_like);
        assert!((verdict.dominant_root - 4.0).abs() < 1e-8);
        assert!(verdict.other_root_moduli.is_empty());
    }

    #[test]
    fn pisot_check_rejects_non_pisot() {
        // x^2 - x - 2 = (x - 2)(x + 1): second root on the unit circle
        let verdict = pisot_check(&[1, 2]).unwrap();
        assert!(!verdict.is_pisot_like);
    }

    #[test]
    fn zero_trailing_coefficient_rejected() {
        assert!(NumerationSystem::linear(vec![1, 0], vec![1, 2], None).is_err());
        assert!(pisot_check(&[1, 0]).is_err());
    }

    #[test]
    fn round_trip_greedy_small() {
        for system in [
            NumerationSystem::base(2).unwrap(),
            NumerationSystem::base(3).unwrap(),
            NumerationSystem::base(10).unwrap(),
            NumerationSystem::fibonacci(),
        ] {
            for n in 0u64..=5_000 {
                let repr = system.greedy_repr(&nat(n)).unwrap();
                assert_eq!(system.value(&repr).unwrap(), nat(n));
            }
        }
    }

    #[test]
    fn greedy_words_are_canonical_and_pad_stable() {
        let fib = NumerationSystem::fibonacci();
        let canon = fib.canonical_dfa().unwrap();
        for n in 0u64..=3_000 {
            let repr = fib.greedy_repr(&nat(n)).unwrap();
            assert!(canon.accepts(&repr));
            assert!(canon.accepts(&Word::from_digits(&[0, 0]).concat(&repr)));
        }
    }

    #[test]
    fn value_is_monotone_in_radix_order() {
        // equal-length canonical words compare like their values
        for system in [NumerationSystem::base(2).unwrap(), NumerationSystem::fibonacci()] {
            let canon = system.canonical_dfa().unwrap();
            for len in 1..=8 {
                let mut previous: Option<(Word, Nat)> = None;
                for word in Dfa::words_of_length(&system.digit_alphabet(), len) {
                    if !canon.accepts(&word) {
                        continue;
                    }
                    let value = system.value(&word).unwrap();
                    if let Some((prev_word, prev_value)) = previous {
                        assert!(prev_value < value, "{prev_word} vs {word}");
                    }
                    previous = Some((word, value));
                }
            }
        }
    }

    #[test]
    fn system_config_round_trip() {
        let config: SystemConfig =
            serde_json::from_str(r#"{"type":"linear","coeffs":[1,1],"initial":[1,2]}"#).unwrap();
        let system = config.build(None).unwrap();
        assert_eq!(system.basis(4).unwrap(), nat(8));
        let config: SystemConfig = serde_json::from_str(r#"{"type":"base","k":4}"#).unwrap();
        assert_eq!(config.build(None).unwrap().max_digit(), 3);
        let config: SystemConfig = serde_json::from_str(r#"{"type":"bijective","p":2}"#).unwrap();
        assert_eq!(config.build(None).unwrap().max_digit(), 2);
    }
}
