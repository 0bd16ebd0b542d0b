//! Exact language semantics for nondeterministic probabilistic automata.
//!
//! An NPA transitions into finitely generated convex sets of distributions
//! over states and outputs a weight in `[0, 1]` per state. There are exactly
//! two ways to collapse the resulting convex set of expected weights that
//! agree with plain expectation — minimum and maximum — and this crate
//! evaluates both, over exact rationals throughout:
//!
//! - [`automata`]: the NPA/DPA/WFA types, validation, and the embeddings
//!   between them;
//! - [`format`]: a line-oriented textual format with bit-exact rationals;
//! - [`convex`]: convex combinations, hull membership by exact LP, and
//!   generator pruning;
//! - [`semantics`]: determinized evaluation under min/max, a matrix-product
//!   evaluator for WFAs, and an exhaustive enumeration oracle;
//! - [`metric`]: a discounted distance between languages, approximable to
//!   any requested precision with a proven tail bound;
//! - [`constructions`]: the longest-run example automaton, output-complement
//!   duality, and the threshold-to-equivalence reduction;
//! - [`lrs`]: linear recurrence sequences and the unary-WFA bridge via
//!   characteristic polynomials;
//! - [`random`]: seeded generators for randomized test corpora.

pub mod automata;
pub mod constructions;
pub mod convex;
pub mod format;
pub mod lrs;
pub mod metric;
pub mod random;
pub mod rat;
pub mod semantics;

pub use automata::{Distribution, Dpa, GeneratorSet, Npa, StateId, SymbolId, Wfa};
pub use format::{parse_automaton, Automaton};
pub use rat::Rat;
pub use semantics::{evaluate, evaluate_wfa, oracle_evaluate, Algebra, Configuration};
