//! Automaton interchange formats: JSON tables and DOT graphs.
//!
//! Emitted automata are renumbered into canonical BFS order first, so the
//! same language built the same way always serializes to the same bytes.

use serde::{Deserialize, Serialize};

use super::{Alphabet, AutomatonError, Dfa, Symbol};

#[derive(Debug, Serialize, Deserialize)]
struct DfaJson {
    alphabet: Vec<SymbolJson>,
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    transitions: Vec<[usize; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SymbolJson {
    Digit(u32),
    Pair([u32; 2]),
}

impl From<Symbol> for SymbolJson {
    fn from(symbol: Symbol) -> Self {
        match symbol {
            Symbol::Digit(d) => SymbolJson::Digit(d),
            Symbol::Pair(l, r) => SymbolJson::Pair([l, r]),
        }
    }
}

impl From<SymbolJson> for Symbol {
    fn from(symbol: SymbolJson) -> Self {
        match symbol {
            SymbolJson::Digit(d) => Symbol::Digit(d),
            SymbolJson::Pair([l, r]) => Symbol::Pair(l, r),
        }
    }
}

impl Dfa {
    pub fn to_json(&self) -> String {
        let canon = self.canonicalized();
        let mut transitions = Vec::new();
        for state in 0..canon.state_count() {
            for column in 0..canon.alphabet().len() {
                transitions.push([state, column, canon.step(state, column)]);
            }
        }
        let doc = DfaJson {
            alphabet: canon.alphabet().iter().map(SymbolJson::from).collect(),
            states: canon.state_count(),
            initial: canon.initial(),
            accepting: canon.accepting_states().into_iter().collect(),
            transitions,
        };
        serde_json::to_string_pretty(&doc).expect("automaton serializes")
    }

    pub fn from_json(text: &str) -> Result<Dfa, AutomatonError> {
        let doc: DfaJson = serde_json::from_str(text)
            .map_err(|e| AutomatonError::MalformedDescription(e.to_string()))?;
        let alphabet = Alphabet::new(doc.alphabet.into_iter().map(Symbol::from).collect())?;
        let width = alphabet.len();
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; width]; doc.states];
        for [from, column, to] in doc.transitions {
            if from >= doc.states || to >= doc.states {
                return Err(AutomatonError::InvalidState {
                    state: from.max(to),
                    count: doc.states,
                });
            }
            if column >= width {
                return Err(AutomatonError::MalformedDescription(format!(
                    "symbol index {column} out of range"
                )));
            }
            if table[from][column].replace(to).is_some() {
                return Err(AutomatonError::MalformedDescription(format!(
                    "duplicate transition for state {from}, symbol index {column}"
                )));
            }
        }
        let transitions = table
            .into_iter()
            .enumerate()
            .map(|(state, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(column, target)| {
                        target.ok_or_else(|| {
                            AutomatonError::MalformedDescription(format!(
                                "missing transition for state {state}, symbol index {column}"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Dfa::new(alphabet, transitions, doc.initial, doc.accepting)
    }
}

/// Graphviz rendering: one node per state, doubled circle for accepting
/// states, edge labels listing the symbols sharing an edge.
pub fn dfa_to_dot(dfa: &Dfa, name: &str) -> String {
    use std::fmt::Write;
    let canon = dfa.canonicalized();
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  start [shape=point];");
    for state in 0..canon.state_count() {
        let shape = if canon.is_accepting(state) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  q{state} [shape={shape}];");
    }
    let _ = writeln!(out, "  start -> q{};", canon.initial());
    for state in 0..canon.state_count() {
        // group parallel edges under one label
        let mut grouped: std::collections::BTreeMap<usize, Vec<String>> = Default::default();
        for column in 0..canon.alphabet().len() {
            grouped
                .entry(canon.step(state, column))
                .or_default()
                .push(canon.alphabet().get(column).to_string());
        }
        for (target, labels) in grouped {
            let _ = writeln!(out, "  q{state} -> q{target} [label=\"{}\"];", labels.join(","));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;

    #[test]
    fn json_roundtrip_preserves_language_and_bytes() {
        let dfa = Dfa::new(
            Alphabet::digits(1),
            vec![vec![3, 1], vec![2, 1], vec![2, 3], vec![3, 3]],
            0,
            [1, 2],
        )
        .unwrap();
        let text = dfa.to_json();
        let back = Dfa::from_json(&text).unwrap();
        assert!(back.equivalent(&dfa).unwrap());
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn pair_symbols_roundtrip() {
        let alphabet = Alphabet::pairs(&Alphabet::digits(1), &Alphabet::digits(1));
        let word = Word::new(vec![Symbol::Pair(1, 0)]);
        let dfa = Dfa::from_word_set(alphabet, std::slice::from_ref(&word)).unwrap();
        let back = Dfa::from_json(&dfa.to_json()).unwrap();
        assert!(back.accepts(&word));
        assert!(!back.accepts(&Word::new(vec![Symbol::Pair(0, 1)])));
    }

    #[test]
    fn missing_transition_is_rejected() {
        let text = r#"{"alphabet":[0,1],"states":1,"initial":0,"accepting":[],"transitions":[[0,0,0]]}"#;
        assert!(matches!(
            Dfa::from_json(text),
            Err(AutomatonError::MalformedDescription(_))
        ));
    }

    #[test]
    fn dot_marks_accepting_states() {
        let dfa = Dfa::universal(Alphabet::digits(1));
        let dot = dfa_to_dot(&dfa, "m");
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("q0 -> q0"));
    }
}
