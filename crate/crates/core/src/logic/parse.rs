//! Prefix-grammar parser and printer for both logics.
//!
//! Terms: `x`, `max`. Atoms: `(< t1 t2)`, `(= t1 t2)`, `(P a t)`,
//! `(eps j n x)`. Connectives: `(not f)`, `(and f g …)`, `(or f g …)`,
//! `(imp f g)`, `(iff f g)`. Quantifiers: `(E x f)`, `(A x f)` in the word
//! logic, `(Eb x f)`, `(Ab x f)` in the number logic, whose root must be the
//! wrapper `(top b f)`. `(succ x y)` abbreviates "y is the successor of x".

use super::{LogicError, NumBody, NumFormula, SfFormula, SfTerm};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open(usize),
    Close(usize),
    Atom(usize, String),
}

impl Token {
    fn position(&self) -> usize {
        match self {
            Token::Open(p) | Token::Close(p) => *p,
            Token::Atom(p, _) => *p,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, LogicError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            '(' => {
                tokens.push(Token::Open(pos));
                chars.next();
            }
            ')' => {
                tokens.push(Token::Close(pos));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            c if c.is_alphanumeric() || "<>=_'".contains(c) => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || "<>=_'".contains(c) {
                        atom.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Atom(pos, atom));
            }
            other => {
                return Err(LogicError::SyntaxError {
                    position: pos,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(tokens)
}

/// S-expression shape, before logical interpretation.
#[derive(Debug, Clone)]
enum Sexp {
    Atom(usize, String),
    List(usize, Vec<Sexp>),
}

impl Sexp {
    fn position(&self) -> usize {
        match self {
            Sexp::Atom(p, _) | Sexp::List(p, _) => *p,
        }
    }
}

fn parse_sexp(tokens: &[Token], at: usize) -> Result<(Sexp, usize), LogicError> {
    match tokens.get(at) {
        None => Err(LogicError::SyntaxError {
            position: usize::MAX,
            message: "unexpected end of input".into(),
        }),
        Some(Token::Atom(pos, text)) => Ok((Sexp::Atom(*pos, text.clone()), at + 1)),
        Some(Token::Close(pos)) => Err(LogicError::SyntaxError {
            position: *pos,
            message: "unexpected )".into(),
        }),
        Some(Token::Open(pos)) => {
            let mut items = Vec::new();
            let mut cursor = at + 1;
            loop {
                match tokens.get(cursor) {
                    Some(Token::Close(_)) => return Ok((Sexp::List(*pos, items), cursor + 1)),
                    Some(_) => {
                        let (item, next) = parse_sexp(tokens, cursor)?;
                        items.push(item);
                        cursor = next;
                    }
                    None => {
                        return Err(LogicError::SyntaxError {
                            position: *pos,
                            message: "unclosed (".into(),
                        })
                    }
                }
            }
        }
    }
}

fn root_sexp(text: &str) -> Result<Sexp, LogicError> {
    let tokens = tokenize(text)?;
    let (sexp, consumed) = parse_sexp(&tokens, 0)?;
    if consumed != tokens.len() {
        return Err(LogicError::SyntaxError {
            position: tokens[consumed].position(),
            message: "trailing input after formula".into(),
        });
    }
    Ok(sexp)
}

fn err(position: usize, message: impl Into<String>) -> LogicError {
    LogicError::SyntaxError {
        position,
        message: message.into(),
    }
}

fn identifier(sexp: &Sexp) -> Result<String, LogicError> {
    match sexp {
        Sexp::Atom(pos, text) => {
            let named = text
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_');
            if text == "max" || !named {
                Err(err(*pos, format!("{text:?} cannot name a variable")))
            } else {
                Ok(text.clone())
            }
        }
        Sexp::List(pos, _) => Err(err(*pos, "expected a variable name")),
    }
}

fn sf_term(sexp: &Sexp) -> Result<SfTerm, LogicError> {
    match sexp {
        Sexp::Atom(_, text) if text == "max" => Ok(SfTerm::Max),
        _ => Ok(SfTerm::Var(identifier(sexp)?)),
    }
}

fn number(sexp: &Sexp) -> Result<u32, LogicError> {
    match sexp {
        Sexp::Atom(pos, text) => text
            .parse::<u32>()
            .map_err(|_| err(*pos, format!("expected a number, got {text:?}"))),
        Sexp::List(pos, _) => Err(err(*pos, "expected a number")),
    }
}

/// Fold `(and a b c …)` rightwards into the binary node.
fn fold_right<T>(items: Vec<T>, join: impl Fn(T, T) -> T) -> T {
    let mut iter = items.into_iter().rev();
    let last = iter.next().expect("arity checked by caller");
    iter.fold(last, |acc, item| join(item, acc))
}

struct FreshNames(usize);

impl FreshNames {
    fn next(&mut self, stem: &str) -> String {
        self.0 += 1;
        format!("{stem}_{}", self.0)
    }
}

fn sf_formula(sexp: &Sexp, fresh: &mut FreshNames) -> Result<SfFormula, LogicError> {
    let Sexp::List(pos, items) = sexp else {
        return Err(err(sexp.position(), "expected a ( … ) form"));
    };
    let Some(Sexp::Atom(head_pos, head)) = items.first() else {
        return Err(err(*pos, "expected an operator"));
    };
    let arity = items.len() - 1;
    let need = |want: usize| -> Result<(), LogicError> {
        if arity == want {
            Ok(())
        } else {
            Err(err(*head_pos, format!("{head} takes {want} arguments, got {arity}")))
        }
    };
    match head.as_str() {
        "<" => {
            need(2)?;
            Ok(SfFormula::Less(sf_term(&items[1])?, sf_term(&items[2])?))
        }
        "=" => {
            need(2)?;
            Ok(SfFormula::Equal(sf_term(&items[1])?, sf_term(&items[2])?))
        }
        "P" => {
            need(2)?;
            let a = number(&items[1])?;
            if a == 0 {
                return Err(err(*head_pos, "letter predicates start at P 1"));
            }
            Ok(SfFormula::Letter(a, sf_term(&items[2])?))
        }
        "succ" => {
            // (succ x y): y = x + 1, expanded to (x<y) ∧ (∀z)(x<z → y ≤ z)
            need(2)?;
            let x = sf_term(&items[1])?;
            let y = sf_term(&items[2])?;
            let z = fresh.next("succ");
            let zt = SfTerm::Var(z.clone());
            Ok(SfFormula::and(
                SfFormula::Less(x.clone(), y.clone()),
                SfFormula::Forall(
                    z,
                    Box::new(SfFormula::implies(
                        SfFormula::Less(x, zt.clone()),
                        SfFormula::or(
                            SfFormula::Less(y.clone(), zt.clone()),
                            SfFormula::Equal(y, zt),
                        ),
                    )),
                ),
            ))
        }
        "not" => {
            need(1)?;
            Ok(SfFormula::not(sf_formula(&items[1], fresh)?))
        }
        "and" | "or" => {
            if arity < 2 {
                return Err(err(*head_pos, format!("{head} takes at least 2 arguments")));
            }
            let parts: Vec<SfFormula> = items[1..]
                .iter()
                .map(|s| sf_formula(s, fresh))
                .collect::<Result<_, _>>()?;
            Ok(if head == "and" {
                fold_right(parts, SfFormula::and)
            } else {
                fold_right(parts, SfFormula::or)
            })
        }
        "imp" => {
            need(2)?;
            Ok(SfFormula::implies(
                sf_formula(&items[1], fresh)?,
                sf_formula(&items[2], fresh)?,
            ))
        }
        "iff" => {
            need(2)?;
            Ok(SfFormula::iff(
                sf_formula(&items[1], fresh)?,
                sf_formula(&items[2], fresh)?,
            ))
        }
        "E" | "A" => {
            need(2)?;
            let var = identifier(&items[1])?;
            let body = sf_formula(&items[2], fresh)?;
            Ok(if head == "E" {
                SfFormula::Exists(var, Box::new(body))
            } else {
                SfFormula::Forall(var, Box::new(body))
            })
        }
        other => Err(err(*head_pos, format!("unknown operator {other:?}"))),
    }
}

/// Parse a word-logic formula.
pub fn parse_sf(text: &str) -> Result<SfFormula, LogicError> {
    sf_formula(&root_sexp(text)?, &mut FreshNames(0))
}

fn num_body(sexp: &Sexp) -> Result<NumBody, LogicError> {
    let Sexp::List(pos, items) = sexp else {
        return Err(err(sexp.position(), "expected a ( … ) form"));
    };
    let Some(Sexp::Atom(head_pos, head)) = items.first() else {
        return Err(err(*pos, "expected an operator"));
    };
    let arity = items.len() - 1;
    let need = |want: usize| -> Result<(), LogicError> {
        if arity == want {
            Ok(())
        } else {
            Err(err(*head_pos, format!("{head} takes {want} arguments, got {arity}")))
        }
    };
    match head.as_str() {
        "<" => {
            need(2)?;
            Ok(NumBody::Less(identifier(&items[1])?, identifier(&items[2])?))
        }
        "=" => {
            need(2)?;
            Ok(NumBody::Equal(identifier(&items[1])?, identifier(&items[2])?))
        }
        "eps" => {
            need(3)?;
            let j = number(&items[1])?;
            let n = identifier(&items[2])?;
            if n != "n" {
                return Err(err(
                    items[2].position(),
                    "the first digit-atom argument is always n",
                ));
            }
            Ok(NumBody::Eps(j, identifier(&items[3])?))
        }
        "not" => {
            need(1)?;
            Ok(NumBody::not(num_body(&items[1])?))
        }
        "and" | "or" => {
            if arity < 2 {
                return Err(err(*head_pos, format!("{head} takes at least 2 arguments")));
            }
            let parts: Vec<NumBody> = items[1..].iter().map(num_body).collect::<Result<_, _>>()?;
            Ok(if head == "and" {
                fold_right(parts, NumBody::and)
            } else {
                fold_right(parts, NumBody::or)
            })
        }
        "imp" => {
            need(2)?;
            Ok(NumBody::implies(num_body(&items[1])?, num_body(&items[2])?))
        }
        "iff" => {
            need(2)?;
            Ok(NumBody::iff(num_body(&items[1])?, num_body(&items[2])?))
        }
        "Eb" | "Ab" => {
            need(2)?;
            let var = identifier(&items[1])?;
            let body = num_body(&items[2])?;
            Ok(if head == "Eb" {
                NumBody::ExistsBounded(var, Box::new(body))
            } else {
                NumBody::ForallBounded(var, Box::new(body))
            })
        }
        other => Err(err(*head_pos, format!("unknown operator {other:?} in number logic"))),
    }
}

/// Parse a number-logic formula; the root must be the `(top b 𝔓)` wrapper.
pub fn parse_num(text: &str) -> Result<NumFormula, LogicError> {
    let root = root_sexp(text)?;
    let Sexp::List(pos, items) = &root else {
        return Err(err(root.position(), "expected (top b 𝔓)"));
    };
    match items.first() {
        Some(Sexp::Atom(_, head)) if head == "top" => {}
        _ => return Err(err(*pos, "the root form must be (top b 𝔓)")),
    }
    if items.len() != 3 {
        return Err(err(*pos, "top takes the bound variable and the main part"));
    }
    match &items[1] {
        Sexp::Atom(_, b) if b == "b" => {}
        other => return Err(err(other.position(), "the bound variable is always b")),
    }
    NumFormula::new(num_body(&items[2])?)
}

fn print_sf_term(term: &SfTerm) -> String {
    match term {
        SfTerm::Var(v) => v.clone(),
        SfTerm::Max => "max".into(),
    }
}

/// Print in the prefix grammar; `parse_sf(print_sf(f))` is structurally `f`.
pub fn print_sf(formula: &SfFormula) -> String {
    match formula {
        SfFormula::Less(a, b) => format!("(< {} {})", print_sf_term(a), print_sf_term(b)),
        SfFormula::Equal(a, b) => format!("(= {} {})", print_sf_term(a), print_sf_term(b)),
        SfFormula::Letter(a, t) => format!("(P {a} {})", print_sf_term(t)),
        SfFormula::Not(inner) => format!("(not {})", print_sf(inner)),
        SfFormula::And(a, b) => format!("(and {} {})", print_sf(a), print_sf(b)),
        SfFormula::Or(a, b) => format!("(or {} {})", print_sf(a), print_sf(b)),
        SfFormula::Implies(a, b) => format!("(imp {} {})", print_sf(a), print_sf(b)),
        SfFormula::Iff(a, b) => format!("(iff {} {})", print_sf(a), print_sf(b)),
        SfFormula::Exists(x, inner) => format!("(E {x} {})", print_sf(inner)),
        SfFormula::Forall(x, inner) => format!("(A {x} {})", print_sf(inner)),
    }
}

fn print_body(body: &NumBody) -> String {
    match body {
        NumBody::Less(a, b) => format!("(< {a} {b})"),
        NumBody::Equal(a, b) => format!("(= {a} {b})"),
        NumBody::Eps(j, x) => format!("(eps {j} n {x})"),
        NumBody::Not(inner) => format!("(not {})", print_body(inner)),
        NumBody::And(a, b) => format!("(and {} {})", print_body(a), print_body(b)),
        NumBody::Or(a, b) => format!("(or {} {})", print_body(a), print_body(b)),
        NumBody::Implies(a, b) => format!("(imp {} {})", print_body(a), print_body(b)),
        NumBody::Iff(a, b) => format!("(iff {} {})", print_body(a), print_body(b)),
        NumBody::ExistsBounded(x, inner) => format!("(Eb {x} {})", print_body(inner)),
        NumBody::ForallBounded(x, inner) => format!("(Ab {x} {})", print_body(inner)),
    }
}

/// Print in the prefix grammar; `parse_num(print_num(f))` is structurally `f`.
pub fn print_num(formula: &NumFormula) -> String {
    format!("(top b {})", print_body(&formula.main))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::catalog;

    #[test]
    fn one_quantifier_formula_parses() {
        let formula = parse_sf("(E x (P 1 x))").unwrap();
        assert_eq!(
            formula,
            SfFormula::exists("x", SfFormula::Letter(1, SfTerm::var("x")))
        );
    }

    #[test]
    fn corpus_round_trips() {
        for (sf, num) in catalog::translation_corpus() {
            assert_eq!(parse_sf(&print_sf(&sf)).unwrap(), sf);
            assert_eq!(parse_num(&print_num(&num)).unwrap(), num);
        }
    }

    #[test]
    fn nary_and_folds_right() {
        let folded = parse_sf("(and (P 1 x) (P 2 x) (P 3 x))").unwrap();
        let explicit = parse_sf("(and (P 1 x) (and (P 2 x) (P 3 x)))").unwrap();
        assert_eq!(folded, explicit);
    }

    #[test]
    fn num_shape_violations_are_reported() {
        // n used as an order operand
        assert!(matches!(
            parse_num("(top b (Eb x (< n x)))"),
            Err(LogicError::SyntaxError { .. }) | Err(LogicError::ShapeViolation(_))
        ));
        // unbound variable in an atom
        assert!(matches!(
            parse_num("(top b (Eb x (< x y)))"),
            Err(LogicError::ShapeViolation(_))
        ));
        // eps with a first argument other than n
        assert!(parse_num("(top b (Eb x (eps 1 x x)))").is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let Err(LogicError::SyntaxError { position, .. }) = parse_sf("(E x (% 1 x))") else {
            panic!("expected a syntax error");
        };
        assert_eq!(position, 6);
    }

    #[test]
    fn succ_macro_expands() {
        let formula = parse_sf("(E x (E y (succ x y)))").unwrap();
        let text = print_sf(&formula);
        assert!(text.contains("(< x y)"));
        assert!(text.contains("(A succ_1"));
        // the expansion parses back to itself
        assert_eq!(parse_sf(&text).unwrap(), formula);
    }

    #[test]
    fn max_is_a_term_not_a_variable() {
        assert!(parse_sf("(< x max)").is_ok());
        assert!(parse_sf("(E max (P 1 max))").is_err());
    }
}
