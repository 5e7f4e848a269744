//! Compilation of word-logic sentences to automata.
//!
//! The compiler works by structural recursion over an alphabet extended with
//! one boolean track per free variable of the subformula at hand. A track
//! must carry exactly one 1 (the position assigned to its variable); the
//! atoms enforce this on their own tracks, negation complements inside the
//! valid universe, and quantification projects a track away. Everything is
//! built reading the least-significant position first — matching the
//! right-to-left position numbering — and the finished sentence automaton is
//! reversed, restricted to nonempty words, and minimized.

// several rows of one table are written per symbol code; indexed loops stay
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};

use crate::automata::{Alphabet, Dfa, Nfa, Symbol};

use super::{LogicError, SfFormula, SfTerm};

/// Desugared internal form: derived connectives expanded, `∀` rewritten
/// through `¬∃¬`, `max` replaced by a marker atom on a fresh variable, and
/// bound variables renamed apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Core {
    Less(String, String),
    Equal(String, String),
    Letter(u32, String),
    /// The variable's position is the last one (the most significant).
    IsMax(String),
    Not(Box<Core>),
    And(Box<Core>, Box<Core>),
    Or(Box<Core>, Box<Core>),
    Exists(String, Box<Core>),
}

impl Core {
    fn not(f: Core) -> Core {
        Core::Not(Box::new(f))
    }

    fn and(a: Core, b: Core) -> Core {
        Core::And(Box::new(a), Box::new(b))
    }

    fn or(a: Core, b: Core) -> Core {
        Core::Or(Box::new(a), Box::new(b))
    }

    fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Core::Less(a, b) | Core::Equal(a, b) => {
                BTreeSet::from([a.clone(), b.clone()])
            }
            Core::Letter(_, x) | Core::IsMax(x) => BTreeSet::from([x.clone()]),
            Core::Not(inner) => inner.free_vars(),
            Core::And(a, b) | Core::Or(a, b) => {
                let mut vars = a.free_vars();
                vars.extend(b.free_vars());
                vars
            }
            Core::Exists(x, inner) => {
                let mut vars = inner.free_vars();
                vars.remove(x);
                vars
            }
        }
    }
}

struct Desugar {
    counter: usize,
    free: BTreeSet<String>,
}

impl Desugar {
    fn fresh(&mut self, stem: &str) -> String {
        self.counter += 1;
        format!("{stem}#{}", self.counter)
    }

    fn term(
        &mut self,
        term: &SfTerm,
        names: &HashMap<String, String>,
        wrappers: &mut Vec<String>,
    ) -> String {
        match term {
            SfTerm::Var(v) => match names.get(v) {
                Some(renamed) => renamed.clone(),
                None => {
                    self.free.insert(v.clone());
                    v.clone()
                }
            },
            SfTerm::Max => {
                let marker = self.fresh("max");
                wrappers.push(marker.clone());
                marker
            }
        }
    }

    fn atom(&mut self, atom: Core, wrappers: Vec<String>) -> Core {
        wrappers.into_iter().rev().fold(atom, |acc, marker| {
            Core::Exists(
                marker.clone(),
                Box::new(Core::and(Core::IsMax(marker), acc)),
            )
        })
    }

    fn walk(&mut self, formula: &SfFormula, names: &HashMap<String, String>) -> Core {
        match formula {
            SfFormula::Less(a, b) => {
                let mut wrappers = Vec::new();
                let a = self.term(a, names, &mut wrappers);
                let b = self.term(b, names, &mut wrappers);
                self.atom(Core::Less(a, b), wrappers)
            }
            SfFormula::Equal(a, b) => {
                let mut wrappers = Vec::new();
                let a = self.term(a, names, &mut wrappers);
                let b = self.term(b, names, &mut wrappers);
                self.atom(Core::Equal(a, b), wrappers)
            }
            SfFormula::Letter(letter, t) => {
                let mut wrappers = Vec::new();
                let x = self.term(t, names, &mut wrappers);
                self.atom(Core::Letter(*letter, x), wrappers)
            }
            SfFormula::Not(inner) => Core::not(self.walk(inner, names)),
            SfFormula::And(a, b) => Core::and(self.walk(a, names), self.walk(b, names)),
            SfFormula::Or(a, b) => Core::or(self.walk(a, names), self.walk(b, names)),
            SfFormula::Implies(a, b) => {
                Core::or(Core::not(self.walk(a, names)), self.walk(b, names))
            }
            SfFormula::Iff(a, b) => {
                let (a, b) = (self.walk(a, names), self.walk(b, names));
                Core::or(
                    Core::and(a.clone(), b.clone()),
                    Core::and(Core::not(a), Core::not(b)),
                )
            }
            SfFormula::Exists(x, inner) => {
                let renamed = self.fresh(x);
                let mut names = names.clone();
                names.insert(x.clone(), renamed.clone());
                Core::Exists(renamed, Box::new(self.walk(inner, &names)))
            }
            SfFormula::Forall(x, inner) => {
                let renamed = self.fresh(x);
                let mut names = names.clone();
                names.insert(x.clone(), renamed.clone());
                Core::not(Core::Exists(
                    renamed,
                    Box::new(Core::not(self.walk(inner, &names))),
                ))
            }
        }
    }
}

/// Alphabet extension: base symbols crossed with one boolean track per
/// variable. Symbol indices encode `(base_index << tracks) | bits`, with bit
/// `i` owned by `vars[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TrackCtx {
    base: Alphabet,
    vars: Vec<String>,
}

impl TrackCtx {
    fn new(base: &Alphabet, vars: BTreeSet<String>) -> TrackCtx {
        TrackCtx {
            base: base.clone(),
            vars: vars.into_iter().collect(),
        }
    }

    fn tracks(&self) -> usize {
        self.vars.len()
    }

    fn width(&self) -> usize {
        self.base.len() << self.tracks()
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::digits(self.width() as u32 - 1)
    }

    fn bit_of(&self, var: &str) -> usize {
        self.vars
            .iter()
            .position(|v| v == var)
            .expect("variable owns a track")
    }

    fn base_index(&self, code: usize) -> usize {
        code >> self.tracks()
    }

    fn bits(&self, code: usize) -> usize {
        code & ((1 << self.tracks()) - 1)
    }

    fn bit(&self, code: usize, var: &str) -> bool {
        self.bits(code) >> self.bit_of(var) & 1 == 1
    }
}

/// `L ⊆ valid(x)`: the track of `x` carries exactly one 1.
fn valid_singleton(ctx: &TrackCtx, var: &str) -> Dfa {
    let width = ctx.width();
    // 0 awaiting the mark, 1 marked, 2 dead
    let mut transitions = vec![vec![0; width]; 3];
    for code in 0..width {
        let marked = ctx.bit(code, var);
        transitions[0][code] = if marked { 1 } else { 0 };
        transitions[1][code] = if marked { 2 } else { 1 };
        transitions[2][code] = 2;
    }
    Dfa::new(ctx.alphabet(), transitions, 0, [1]).expect("table is total")
}

/// Reinterpret `dfa` (over `from`) over the larger context `to` by ignoring
/// the added tracks.
fn cylindrify(dfa: &Dfa, from: &TrackCtx, to: &TrackCtx) -> Dfa {
    debug_assert!(from.vars.iter().all(|v| to.vars.contains(v)));
    let width = to.width();
    let restrict = |code: usize| -> usize {
        let base = to.base_index(code);
        let mut bits = 0usize;
        for (i, var) in from.vars.iter().enumerate() {
            if to.bit(code, var) {
                bits |= 1 << i;
            }
        }
        (base << from.tracks()) | bits
    };
    let transitions = (0..dfa.state_count())
        .map(|state| (0..width).map(|code| dfa.step(state, restrict(code))).collect())
        .collect();
    Dfa::new(
        to.alphabet(),
        transitions,
        dfa.initial(),
        (0..dfa.state_count()).filter(|&q| dfa.is_accepting(q)),
    )
    .expect("table is total")
}

/// Erase the track of `var`: nondeterministic image over the smaller context.
fn project(dfa: &Dfa, from: &TrackCtx, var: &str) -> (Dfa, TrackCtx) {
    let mut vars = from.vars.clone();
    vars.retain(|v| v != var);
    let to = TrackCtx {
        base: from.base.clone(),
        vars,
    };
    let mut nfa = Nfa::new(to.alphabet(), dfa.state_count());
    nfa.set_initial(dfa.initial());
    for state in 0..dfa.state_count() {
        if dfa.is_accepting(state) {
            nfa.set_accepting(state);
        }
        for code in 0..from.width() {
            let base = from.base_index(code);
            let mut bits = 0usize;
            for (i, v) in to.vars.iter().enumerate() {
                if from.bit(code, v) {
                    bits |= 1 << i;
                }
            }
            let image = (base << to.tracks()) | bits;
            nfa.add_transition(state, image, dfa.step(state, code));
        }
    }
    (nfa.determinize().minimized(), to)
}

struct Compiler<'a> {
    base: &'a Alphabet,
    memo: HashMap<Core, Dfa>,
}

impl<'a> Compiler<'a> {
    fn ctx_of(&self, formula: &Core) -> TrackCtx {
        TrackCtx::new(self.base, formula.free_vars())
    }

    /// Invariant: the result is over `ctx_of(formula)`, keeps every free
    /// track a singleton, and accepts exactly the satisfying
    /// (reversed word, assignment) pairs.
    fn compile(&mut self, formula: &Core) -> Dfa {
        if let Some(hit) = self.memo.get(formula) {
            return hit.clone();
        }
        let ctx = self.ctx_of(formula);
        let result = match formula {
            Core::Less(x, y) => {
                if x == y {
                    Dfa::empty(ctx.alphabet())
                } else {
                    self.atom_less(&ctx, x, y)
                }
            }
            Core::Equal(x, y) => {
                if x == y {
                    valid_singleton(&ctx, x)
                } else {
                    self.atom_equal(&ctx, x, y)
                }
            }
            Core::Letter(a, x) => self.atom_letter(&ctx, *a, x),
            Core::IsMax(x) => self.atom_is_max(&ctx, x),
            Core::Not(inner) => {
                let compiled = self.compile(inner);
                let mut result = cylindrify(&compiled, &self.ctx_of(inner), &ctx).complement();
                for var in &ctx.vars {
                    result = result
                        .intersection(&valid_singleton(&ctx, var))
                        .expect("same synthetic alphabet");
                }
                result.minimized()
            }
            Core::And(a, b) | Core::Or(a, b) => {
                let compiled_a = cylindrify(&self.compile(a), &self.ctx_of(a), &ctx);
                let compiled_b = cylindrify(&self.compile(b), &self.ctx_of(b), &ctx);
                let mut result = if matches!(formula, Core::And(..)) {
                    compiled_a.intersection(&compiled_b)
                } else {
                    compiled_a.union(&compiled_b)
                }
                .expect("same synthetic alphabet");
                // a disjunct leaves the other side's tracks unconstrained
                if matches!(formula, Core::Or(..)) {
                    for var in &ctx.vars {
                        result = result
                            .intersection(&valid_singleton(&ctx, var))
                            .expect("same synthetic alphabet");
                    }
                }
                result.minimized()
            }
            Core::Exists(x, inner) => {
                let inner_ctx = self.ctx_of(inner);
                let compiled = self.compile(inner);
                if inner_ctx.vars.iter().any(|v| v == x) {
                    project(&compiled, &inner_ctx, x).0
                } else {
                    // vacuous quantifier over the nonempty domain
                    compiled
                }
            }
        };
        self.memo.insert(formula.clone(), result.clone());
        result
    }

    fn atom_less(&self, ctx: &TrackCtx, x: &str, y: &str) -> Dfa {
        let width = ctx.width();
        // 0 before x, 1 between, 2 after y, 3 dead
        let mut transitions = vec![vec![3; width]; 4];
        for code in 0..width {
            let (bx, by) = (ctx.bit(code, x), ctx.bit(code, y));
            transitions[0][code] = match (bx, by) {
                (false, false) => 0,
                (true, false) => 1,
                _ => 3,
            };
            transitions[1][code] = match (bx, by) {
                (false, false) => 1,
                (false, true) => 2,
                _ => 3,
            };
            transitions[2][code] = if !bx && !by { 2 } else { 3 };
        }
        Dfa::new(ctx.alphabet(), transitions, 0, [2]).expect("table is total")
    }

    fn atom_equal(&self, ctx: &TrackCtx, x: &str, y: &str) -> Dfa {
        let width = ctx.width();
        let mut transitions = vec![vec![2; width]; 3];
        for code in 0..width {
            let (bx, by) = (ctx.bit(code, x), ctx.bit(code, y));
            transitions[0][code] = match (bx, by) {
                (false, false) => 0,
                (true, true) => 1,
                _ => 2,
            };
            transitions[1][code] = if !bx && !by { 1 } else { 2 };
        }
        Dfa::new(ctx.alphabet(), transitions, 0, [1]).expect("table is total")
    }

    fn atom_letter(&self, ctx: &TrackCtx, letter: u32, x: &str) -> Dfa {
        let width = ctx.width();
        let mut transitions = vec![vec![2; width]; 3];
        for code in 0..width {
            let marked = ctx.bit(code, x);
            let symbol = ctx.base.get(ctx.base_index(code));
            let matches = symbol == Symbol::Digit(letter);
            transitions[0][code] = match (marked, matches) {
                (false, _) => 0,
                (true, true) => 1,
                (true, false) => 2,
            };
            transitions[1][code] = if marked { 2 } else { 1 };
        }
        Dfa::new(ctx.alphabet(), transitions, 0, [1]).expect("table is total")
    }

    fn atom_is_max(&self, ctx: &TrackCtx, x: &str) -> Dfa {
        let width = ctx.width();
        // accept only when the mark lands on the final symbol read
        let mut transitions = vec![vec![2; width]; 3];
        for code in 0..width {
            let marked = ctx.bit(code, x);
            transitions[0][code] = if marked { 1 } else { 0 };
            transitions[1][code] = 2;
        }
        Dfa::new(ctx.alphabet(), transitions, 0, [1]).expect("table is total")
    }
}

/// Compile a sentence into the automaton of its defining language over `Σ+`.
///
/// The automaton of every compiled sentence is aperiodic; the acceptance
/// suite re-checks that on each instance.
pub fn compile_sf(formula: &SfFormula, alphabet: &Alphabet) -> Result<Dfa, LogicError> {
    let mut desugar = Desugar {
        counter: 0,
        free: BTreeSet::new(),
    };
    let core = desugar.walk(formula, &HashMap::new());
    if !desugar.free.is_empty() {
        return Err(LogicError::NotASentence(
            desugar.free.into_iter().collect(),
        ));
    }
    let mut compiler = Compiler {
        base: alphabet,
        memo: HashMap::new(),
    };
    let compiled = compiler.compile(&core);
    debug_assert!(compiled.alphabet().len() == alphabet.len());

    // move from the synthetic track alphabet (zero tracks left) back to Σ;
    // columns agree because both are in base order
    let transitions = (0..compiled.state_count())
        .map(|state| {
            (0..alphabet.len())
                .map(|column| compiled.step(state, column))
                .collect()
        })
        .collect();
    let relabeled = Dfa::new(
        alphabet.clone(),
        transitions,
        compiled.initial(),
        (0..compiled.state_count()).filter(|&q| compiled.is_accepting(q)),
    )?;

    // least-significant-first reading order to the standard convention
    let restricted = relabeled
        .reverse()
        .intersection(&Dfa::sigma_plus(alphabet.clone()))?;
    let minimal = restricted.minimized();
    debug_assert!(
        minimal.is_aperiodic().is_ok_and(|r| r.aperiodic),
        "compiled sentences are star-free"
    );
    Ok(minimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;
    use crate::logic::{catalog, eval_sf, parse_sf, word_model, Valuation};

    fn w(text: &str) -> Word {
        Word::parse_digits(text).unwrap()
    }

    #[test]
    fn tautology_compiles_to_sigma_plus() {
        let alphabet = Alphabet::digits(1);
        let formula = parse_sf("(A x (= x x))").unwrap();
        let dfa = compile_sf(&formula, &alphabet).unwrap();
        assert!(dfa
            .equivalent(&Dfa::sigma_plus(alphabet))
            .unwrap());
    }

    #[test]
    fn ones_then_zeros_compiles_to_expected_language() {
        let alphabet = Alphabet::digits(1);
        let dfa = compile_sf(&catalog::ones_then_zeros_sentence(), &alphabet).unwrap();
        for (word, expect) in [
            ("1", true),
            ("1100", true),
            ("111", true),
            ("10", true),
            ("0", false),
            ("01", false),
            ("1101001", false),
            ("", false),
        ] {
            assert_eq!(dfa.accepts(&w(word)), expect, "word {word}");
        }
    }

    #[test]
    fn single_one_sentence_compiles_to_padded_10_star() {
        let alphabet = Alphabet::digits(1);
        let dfa = compile_sf(&catalog::single_one_sentence(), &alphabet).unwrap();
        for len in 1..=7 {
            for word in Dfa::words_of_length(&alphabet, len) {
                let ones = word.digits().unwrap().iter().filter(|&&d| d == 1).count();
                assert_eq!(dfa.accepts(&word), ones == 1, "word {word}");
            }
        }
    }

    #[test]
    fn compiler_agrees_with_evaluator() {
        let alphabet = Alphabet::digits(1);
        let sentences = [
            catalog::ones_then_zeros_sentence(),
            catalog::single_one_sentence(),
            parse_sf("(E x (and (P 1 x) (= x max)))").unwrap(),
            parse_sf("(E x (E y (and (succ x y) (and (P 1 x) (P 1 y)))))").unwrap(),
            parse_sf("(A x (imp (P 1 x) (= x max)))").unwrap(),
            parse_sf("(iff (E x (P 1 x)) (E y (P 1 y)))").unwrap(),
        ];
        for sentence in &sentences {
            let dfa = compile_sf(sentence, &alphabet).unwrap();
            for len in 1..=7 {
                for word in Dfa::words_of_length(&alphabet, len) {
                    let model = word_model(&word).unwrap();
                    let direct = eval_sf(sentence, &model, &Valuation::new()).unwrap();
                    assert_eq!(dfa.accepts(&word), direct, "word {word}");
                }
            }
            assert!(dfa.is_aperiodic().unwrap().aperiodic);
        }
    }

    #[test]
    fn max_atoms_pick_the_leading_position() {
        // leading letter is 1
        let alphabet = Alphabet::digits(1);
        let formula = parse_sf("(P 1 max)").unwrap();
        let dfa = compile_sf(&formula, &alphabet).unwrap();
        for (word, expect) in [("1", true), ("10", true), ("01", false), ("0", false)] {
            assert_eq!(dfa.accepts(&w(word)), expect, "word {word}");
        }
    }

    #[test]
    fn open_formulas_are_rejected() {
        let alphabet = Alphabet::digits(1);
        let open = parse_sf("(P 1 x)").unwrap();
        assert!(matches!(
            compile_sf(&open, &alphabet),
            Err(LogicError::NotASentence(_))
        ));
    }

    #[test]
    fn wider_alphabets_compile() {
        // at least one 2 somewhere, over {0,1,2}
        let alphabet = Alphabet::digits(2);
        let formula = parse_sf("(E x (P 2 x))").unwrap();
        let dfa = compile_sf(&formula, &alphabet).unwrap();
        for len in 1..=4 {
            for word in Dfa::words_of_length(&alphabet, len) {
                let expect = word.digits().unwrap().contains(&2);
                assert_eq!(dfa.accepts(&word), expect, "word {word}");
            }
        }
    }
}
