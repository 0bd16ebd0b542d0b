//! Language semantics of NPAs under the min and max algebras.
//!
//! An NPA is evaluated in its determinization: a configuration is a
//! finitely generated convex set of distributions over states. Reading a
//! symbol maps every generator through every combination of per-state
//! nondeterministic choices; the output of a configuration is the extremum
//! over generators of the expected output weight. Because expectation is
//! affine, the extremum over the whole hull is attained at a generator —
//! that is what makes evaluation finite.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automata::{Distribution, GeneratorSet, Npa, StateId, SymbolId, Wfa};
use crate::convex::prune;
use crate::rat::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("enumeration cap of {cap} leaves exceeded")]
    CapExceeded { cap: usize },
}

/// The two output algebras collapsing a convex set of expected weights.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algebra {
    Min,
    Max,
}

impl Algebra {
    fn pick(self, acc: Rat, next: Rat) -> Rat {
        match self {
            Algebra::Min => acc.min(next),
            Algebra::Max => acc.max(next),
        }
    }
}

/// A determinized state: a generator set over the automaton's states.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Configuration {
    pub set: GeneratorSet,
}

/// Default cap on distributions enumerated by [`oracle_evaluate`].
pub const DEFAULT_ORACLE_CAP: usize = 1_000_000;

/// The initial configuration: the point distribution at the initial state.
pub fn initial_config(a: &Npa) -> Configuration {
    Configuration {
        set: GeneratorSet::singleton(Distribution::point(a.initial)),
    }
}

/// Reads one symbol. For each generator g and each choice function h picking
/// a generator of the transition set of every state in g's support, the
/// successor is the g-weighted mix of the picks; the collected successors are
/// pruned to an irredundant generator set spanning the same hull.
pub fn step(a: &Npa, cfg: &Configuration, sym: SymbolId) -> Result<Configuration, EvalError> {
    check_symbol(&a.alphabet, sym)?;
    let mut successors: BTreeSet<Distribution> = BTreeSet::new();
    for g in &cfg.set.generators {
        for_each_choice_mix(g, |s| &a.transitions[s][sym].generators, &mut |d| {
            successors.insert(d);
            true
        });
    }
    let set = GeneratorSet::new(successors.into_iter().collect());
    Ok(Configuration { set: prune(&set) })
}

/// The configuration's output weight: the algebra's extremum over
/// generators of the expected output.
pub fn output(a: &Npa, cfg: &Configuration, alg: Algebra) -> Rat {
    let mut gens = cfg.set.generators.iter();
    let first = gens
        .next()
        .expect("configuration has at least one generator");
    let mut best = first.expectation(|s| a.output[s].clone());
    for g in gens {
        best = alg.pick(best, g.expectation(|s| a.output[s].clone()));
    }
    best
}

/// The weight the automaton assigns to `word` under the chosen algebra.
pub fn evaluate(a: &Npa, word: &[SymbolId], alg: Algebra) -> Result<Rat, EvalError> {
    let mut cfg = initial_config(a);
    for &sym in word {
        cfg = step(a, &cfg, sym)?;
    }
    Ok(output(a, &cfg, alg))
}

/// Weight of `word` in a weighted automaton: initial vector times the
/// product of the symbol matrices times the output vector.
pub fn evaluate_wfa(w: &Wfa, word: &[SymbolId]) -> Result<Rat, EvalError> {
    let n = w.states.len();
    let mut current = w.initial_vector.clone();
    for &sym in word {
        check_symbol(&w.alphabet, sym)?;
        let m = &w.matrices[sym];
        let mut next = vec![Rat::zero(); n];
        for i in 0..n {
            if current[i].is_zero() {
                continue;
            }
            for (j, cell) in m[i].iter().enumerate() {
                if !cell.is_zero() {
                    next[j] = &next[j] + &(&current[i] * cell);
                }
            }
        }
        current = next;
    }
    Ok(current
        .iter()
        .zip(&w.output_vector)
        .map(|(x, y)| x * y)
        .sum())
}

/// Independent oracle for [`evaluate`]: exhaustively enumerates every
/// sequence of per-state generator choices along the word, with no pruning
/// (duplicate distributions are merged, nothing else), then takes the
/// algebra's extremum of the expected outputs.
pub fn oracle_evaluate(a: &Npa, word: &[SymbolId], alg: Algebra) -> Result<Rat, EvalError> {
    oracle_evaluate_capped(a, word, alg, DEFAULT_ORACLE_CAP)
}

pub fn oracle_evaluate_capped(
    a: &Npa,
    word: &[SymbolId],
    alg: Algebra,
    cap: usize,
) -> Result<Rat, EvalError> {
    let mut frontier: BTreeSet<Distribution> = BTreeSet::new();
    frontier.insert(Distribution::point(a.initial));
    let mut produced = 0usize;
    for &sym in word {
        check_symbol(&a.alphabet, sym)?;
        let mut next: BTreeSet<Distribution> = BTreeSet::new();
        let mut ok = true;
        for d in &frontier {
            for_each_choice_mix(d, |s| &a.transitions[s][sym].generators, &mut |succ| {
                produced += 1;
                if produced > cap {
                    ok = false;
                    return false;
                }
                next.insert(succ);
                true
            });
            if !ok {
                return Err(EvalError::CapExceeded { cap });
            }
        }
        frontier = next;
    }
    let mut values = frontier
        .iter()
        .map(|d| d.expectation(|s| a.output[s].clone()));
    let mut best = values.next().expect("frontier is nonempty");
    for v in values {
        best = alg.pick(best, v);
    }
    Ok(best)
}

/// Enumerates choice functions over the support of `d`: for each assignment
/// of one option from `options(s)` to every support state `s`, calls `emit`
/// with the d-weighted mix of the chosen distributions. Stops early if
/// `emit` returns false.
fn for_each_choice_mix<'a>(
    d: &Distribution,
    options: impl Fn(StateId) -> &'a [Distribution],
    emit: &mut impl FnMut(Distribution) -> bool,
) {
    let support: Vec<StateId> = d.support().collect();
    let choices: Vec<&[Distribution]> = support.iter().map(|&s| options(s)).collect();
    let mut counters = vec![0usize; support.len()];
    loop {
        let mut weights: BTreeMap<StateId, Rat> = BTreeMap::new();
        for (i, &s) in support.iter().enumerate() {
            let picked = &choices[i][counters[i]];
            let p = &d.weights[&s];
            for (&t, w) in &picked.weights {
                let entry = weights.entry(t).or_insert_with(Rat::zero);
                *entry = &*entry + &(p * w);
            }
        }
        weights.retain(|_, w| !w.is_zero());
        if !emit(Distribution { weights }) {
            return;
        }
        // Odometer over the per-state choice indices.
        let mut i = 0;
        loop {
            if i == support.len() {
                return;
            }
            counters[i] += 1;
            if counters[i] < choices[i].len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

fn check_symbol(alphabet: &[String], sym: SymbolId) -> Result<(), EvalError> {
    if sym < alphabet.len() {
        Ok(())
    } else {
        Err(EvalError::UnknownSymbol(format!("#{sym}")))
    }
}

/// Splits whitespace-separated tokens and resolves each against the
/// alphabet. Symbols are whole tokens, not characters.
pub fn parse_word(alphabet: &[String], text: &str) -> Result<Vec<SymbolId>, EvalError> {
    text.split_whitespace()
        .map(|tok| {
            alphabet
                .iter()
                .position(|s| s == tok)
                .ok_or_else(|| EvalError::UnknownSymbol(tok.to_string()))
        })
        .collect()
}

/// A disagreement between two evaluators on one word and algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mismatch {
    pub word: Vec<SymbolId>,
    pub algebra: Algebra,
    pub left: Rat,
    pub right: Rat,
}

/// Runs two evaluators over every word up to `max_len` under both algebras
/// and reports the first disagreement, scanning words in length-then-
/// lexicographic order.
pub fn compare_evaluators<F, G>(
    a: &Npa,
    max_len: usize,
    left: F,
    right: G,
) -> Result<Option<Mismatch>, EvalError>
where
    F: Fn(&Npa, &[SymbolId], Algebra) -> Result<Rat, EvalError>,
    G: Fn(&Npa, &[SymbolId], Algebra) -> Result<Rat, EvalError>,
{
    let mut level: Vec<Vec<SymbolId>> = vec![vec![]];
    for len in 0..=max_len {
        for word in &level {
            for alg in [Algebra::Min, Algebra::Max] {
                let l = left(a, word, alg)?;
                let r = right(a, word, alg)?;
                if l != r {
                    return Ok(Some(Mismatch {
                        word: word.clone(),
                        algebra: alg,
                        left: l,
                        right: r,
                    }));
                }
            }
        }
        if len == max_len {
            break;
        }
        level = level
            .iter()
            .flat_map(|w| {
                (0..a.alphabet.len()).map(move |sym| {
                    let mut next = w.clone();
                    next.push(sym);
                    next
                })
            })
            .collect();
    }
    Ok(None)
}

/// Checks [`evaluate`] against [`oracle_evaluate`] on all words up to
/// `max_len`.
pub fn oracle_check(a: &Npa, max_len: usize, cap: usize) -> Result<Option<Mismatch>, EvalError> {
    compare_evaluators(a, max_len, evaluate, |a, w, alg| {
        oracle_evaluate_capped(a, w, alg, cap)
    })
}
