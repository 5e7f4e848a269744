//! Named formulas used across tests, reports and documentation.

use super::{NumBody, NumFormula, SfFormula, SfTerm};

fn var(name: &str) -> SfTerm {
    SfTerm::var(name)
}

/// Sentence defining `1+0*`: some position carries 1, everything above it
/// carries 1, everything below carries 0.
pub fn ones_then_zeros_sentence() -> SfFormula {
    SfFormula::exists(
        "x",
        SfFormula::and(
            SfFormula::Letter(1, var("x")),
            SfFormula::and(
                SfFormula::forall(
                    "y",
                    SfFormula::implies(
                        SfFormula::Less(var("x"), var("y")),
                        SfFormula::Letter(1, var("y")),
                    ),
                ),
                SfFormula::forall(
                    "y",
                    SfFormula::implies(
                        SfFormula::Less(var("y"), var("x")),
                        SfFormula::not(SfFormula::Letter(1, var("y"))),
                    ),
                ),
            ),
        ),
    )
}

/// Number-logic twin of [`ones_then_zeros_sentence`]: defines the integers
/// whose binary digits are a block of 1s followed by 0s.
pub fn ones_then_zeros_num() -> NumFormula {
    NumFormula::new(NumBody::exists(
        "x",
        NumBody::and(
            NumBody::Eps(1, "x".into()),
            NumBody::and(
                NumBody::forall(
                    "y",
                    NumBody::implies(
                        NumBody::Less("x".into(), "y".into()),
                        NumBody::Eps(1, "y".into()),
                    ),
                ),
                NumBody::forall(
                    "y",
                    NumBody::implies(
                        NumBody::Less("y".into(), "x".into()),
                        NumBody::not(NumBody::Eps(1, "y".into())),
                    ),
                ),
            ),
        ),
    ))
    .expect("well-shaped")
}

/// Sentence defining the words with exactly one 1 (the padded form of `10*`).
pub fn single_one_sentence() -> SfFormula {
    SfFormula::exists(
        "x",
        SfFormula::and(
            SfFormula::Letter(1, var("x")),
            SfFormula::forall(
                "y",
                SfFormula::implies(
                    SfFormula::Letter(1, var("y")),
                    SfFormula::Equal(var("x"), var("y")),
                ),
            ),
        ),
    )
}

/// Number-logic twin of [`single_one_sentence`]: in base 2 it defines the
/// powers of 2.
pub fn single_one_num() -> NumFormula {
    NumFormula::new(NumBody::exists(
        "x",
        NumBody::and(
            NumBody::Eps(1, "x".into()),
            NumBody::forall(
                "y",
                NumBody::implies(
                    NumBody::Eps(1, "y".into()),
                    NumBody::Equal("x".into(), "y".into()),
                ),
            ),
        ),
    ))
    .expect("well-shaped")
}

/// The formula pairs exercised by the translation tests.
pub fn translation_corpus() -> Vec<(SfFormula, NumFormula)> {
    vec![
        (ones_then_zeros_sentence(), ones_then_zeros_num()),
        (single_one_sentence(), single_one_num()),
    ]
}
