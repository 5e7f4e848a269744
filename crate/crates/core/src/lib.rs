//! Star-free representability of integer sets across numeration systems.
//!
//! The toolkit decides whether the digit representations of a set of
//! non-negative integers form a star-free (equivalently, aperiodic) regular
//! language, and manipulates such sets:
//!
//! * [`automata`] — complete DFAs over digit and pair alphabets, boolean
//!   algebra, minimization, reversal, and the structural tests
//!   (permutation-freeness, definiteness) that decide star-freeness;
//! * [`numeration`] — positional, linear-recurrence and bijective numeration
//!   systems, greedy and bijective representations, canonical-form and
//!   residue automata;
//! * [`setspec`] — integer-set descriptions (ultimately periodic data,
//!   automata, star-free expressions, formulas), their compilation to
//!   recognizers, and the per-base classification;
//! * [`logic`] — first-order logic on word models with an evaluator and a
//!   compiler to automata, the bounded-quantifier number logic, and the
//!   syntactic translations between the two;
//! * [`basechange`] — digit grouping `p → p^k` and letter-to-block expansion
//!   `p^k → p`;
//! * [`padic`] — bijective (zero-free) digit systems and the normalization
//!   transducer linking them to greedy representations, with the star-freeness
//!   transfer pipeline;
//! * [`battery`] — seeded generators for the randomized verdict batteries.
//!
//! All values are immutable after construction and operations are pure, so
//! anything here can be shared read-only across worker threads.

pub mod automata;
pub mod basechange;
pub mod battery;
pub mod logic;
pub mod numeration;
pub mod padic;
pub mod setspec;
