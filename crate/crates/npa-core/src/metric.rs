//! Discounted distance between weighted languages, computable to any
//! precision.
//!
//! For a discount `c` in `[0, 1)` the distance weighs the difference at each
//! word `u` by `(c / |A|)^|u|`. Truncating the sum at the word horizon
//! `n` — the least `n` with `c^n <= (1 - c) * kappa` — leaves a tail of at
//! most `kappa`, so the truncated sum approximates the distance from below
//! within `kappa`.

use thiserror::Error;

use crate::automata::{Npa, SymbolId};
use crate::rat::Rat;
use crate::semantics::{self, Algebra, Configuration};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("discount {0} outside [0,1)")]
    DiscountRange(Rat),
    #[error("precision {0} must be positive")]
    PrecisionRange(Rat),
    #[error("alphabet mismatch: {0:?} vs {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),
}

/// A discount and a precision: `0 <= c < 1`, `kappa > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetricQuery {
    pub c: Rat,
    pub kappa: Rat,
}

impl MetricQuery {
    pub fn new(c: Rat, kappa: Rat) -> Result<Self, MetricError> {
        if c.is_negative() || c >= Rat::one() {
            return Err(MetricError::DiscountRange(c));
        }
        if kappa.is_negative() || kappa.is_zero() {
            return Err(MetricError::PrecisionRange(kappa));
        }
        Ok(MetricQuery { c, kappa })
    }
}

/// A weighted language walked along word prefixes. `advance` expects a
/// symbol index below the alphabet length.
pub trait Language {
    type State: Clone;

    fn alphabet(&self) -> &[String];
    fn initial_state(&self) -> Self::State;
    fn advance(&self, state: &Self::State, sym: SymbolId) -> Self::State;
    fn weight(&self, state: &Self::State) -> Rat;

    fn eval(&self, word: &[SymbolId]) -> Rat {
        let mut st = self.initial_state();
        for &sym in word {
            st = self.advance(&st, sym);
        }
        self.weight(&st)
    }
}

/// The language of an NPA under one algebra; states are determinized
/// configurations, so prefix-tree traversals reuse them.
pub struct NpaLanguage<'a> {
    pub npa: &'a Npa,
    pub algebra: Algebra,
}

impl<'a> NpaLanguage<'a> {
    pub fn new(npa: &'a Npa, algebra: Algebra) -> Self {
        NpaLanguage { npa, algebra }
    }
}

impl Language for NpaLanguage<'_> {
    type State = Configuration;

    fn alphabet(&self) -> &[String] {
        &self.npa.alphabet
    }

    fn initial_state(&self) -> Configuration {
        semantics::initial_config(self.npa)
    }

    fn advance(&self, state: &Configuration, sym: SymbolId) -> Configuration {
        semantics::step(self.npa, state, sym).expect("symbol within alphabet")
    }

    fn weight(&self, state: &Configuration) -> Rat {
        semantics::output(self.npa, state, self.algebra)
    }
}

/// The constant language.
pub struct ConstantLanguage {
    pub alphabet: Vec<String>,
    pub value: Rat,
}

impl Language for ConstantLanguage {
    type State = ();

    fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    fn initial_state(&self) {}

    fn advance(&self, _: &(), _: SymbolId) {}

    fn weight(&self, _: &()) -> Rat {
        self.value.clone()
    }
}

/// A language given by an arbitrary evaluator on words.
pub struct FnLanguage<F: Fn(&[SymbolId]) -> Rat> {
    pub alphabet: Vec<String>,
    pub eval_fn: F,
}

impl<F: Fn(&[SymbolId]) -> Rat> Language for FnLanguage<F> {
    type State = Vec<SymbolId>;

    fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    fn initial_state(&self) -> Vec<SymbolId> {
        Vec::new()
    }

    fn advance(&self, state: &Vec<SymbolId>, sym: SymbolId) -> Vec<SymbolId> {
        let mut next = state.clone();
        next.push(sym);
        next
    }

    fn weight(&self, state: &Vec<SymbolId>) -> Rat {
        (self.eval_fn)(state)
    }
}

/// The truncation depth: the least `n >= 0` with `c^n <= (1 - c) * kappa`,
/// found by exact repeated multiplication. For `c = 0` the horizon is 1, so
/// that the truncated sum is exactly the empty-word difference.
pub fn word_horizon(q: &MetricQuery) -> usize {
    if q.c.is_zero() {
        return 1;
    }
    let bound = (Rat::one() - &q.c) * &q.kappa;
    let mut n = 0;
    let mut power = Rat::one();
    while power > bound {
        power = power * &q.c;
        n += 1;
    }
    n
}

/// One word's share of the truncated sum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DifferenceRow {
    pub word: Vec<SymbolId>,
    pub value1: Rat,
    pub value2: Rat,
    /// `|value1 - value2| * (c/|A|)^len`.
    pub contribution: Rat,
}

/// The truncated discounted sum `x`: within `kappa` of the true distance,
/// never above it. Exact rational.
pub fn approx_metric<L1, L2>(l1: &L1, l2: &L2, q: &MetricQuery) -> Result<Rat, MetricError>
where
    L1: Language,
    L2: Language,
{
    let mut sum = Rat::zero();
    walk_scaled(l1, l2, q, |_, _, _, contribution| {
        sum = &sum + &contribution;
    })?;
    Ok(sum)
}

/// Per-word contributions below the horizon, sorted by descending
/// contribution (ties in length-then-lexicographic word order). The
/// contributions sum to [`approx_metric`]'s value.
pub fn difference_report<L1, L2>(
    l1: &L1,
    l2: &L2,
    q: &MetricQuery,
) -> Result<Vec<DifferenceRow>, MetricError>
where
    L1: Language,
    L2: Language,
{
    let mut rows = Vec::new();
    walk_scaled(l1, l2, q, |word, v1, v2, contribution| {
        rows.push(DifferenceRow {
            word: word.to_vec(),
            value1: v1.clone(),
            value2: v2.clone(),
            contribution,
        });
    })?;
    rows.sort_by(|a, b| {
        b.contribution
            .cmp(&a.contribution)
            .then(a.word.len().cmp(&b.word.len()))
            .then(a.word.cmp(&b.word))
    });
    Ok(rows)
}

/// Breadth-first over the word trie up to the horizon: words are visited in
/// length-then-lexicographic order, and each prefix's language states are
/// shared between its extensions.
fn walk_scaled<L1, L2>(
    l1: &L1,
    l2: &L2,
    q: &MetricQuery,
    mut visit: impl FnMut(&[SymbolId], &Rat, &Rat, Rat),
) -> Result<(), MetricError>
where
    L1: Language,
    L2: Language,
{
    if l1.alphabet() != l2.alphabet() {
        return Err(MetricError::AlphabetMismatch(
            l1.alphabet().to_vec(),
            l2.alphabet().to_vec(),
        ));
    }
    let horizon = word_horizon(q);
    let n_symbols = l1.alphabet().len();
    let per_symbol = &q.c / &Rat::from_int(n_symbols as i64);
    let mut frontier = vec![(Vec::new(), l1.initial_state(), l2.initial_state())];
    let mut scale = Rat::one();
    let mut len = 0;
    while len < horizon {
        for (word, st1, st2) in &frontier {
            let v1 = l1.weight(st1);
            let v2 = l2.weight(st2);
            let contribution = (&v1 - &v2).abs() * &scale;
            visit(word, &v1, &v2, contribution);
        }
        len += 1;
        if len == horizon {
            break;
        }
        frontier = frontier
            .iter()
            .flat_map(|(word, st1, st2)| {
                (0..n_symbols).map(move |sym| {
                    let mut next = word.clone();
                    next.push(sym);
                    (next, l1.advance(st1, sym), l2.advance(st2, sym))
                })
            })
            .collect();
        scale = scale * &per_symbol;
    }
    Ok(())
}
