//! Seeded random generation of small automata, used by the test suites.

use std::collections::BTreeMap;

use rand::Rng;

use crate::automata::{Distribution, Dpa, GeneratorSet, Npa, StateId, Wfa};
use crate::rat::Rat;

/// A rational in `[0, 1]` with denominator at most `max_denom`.
pub fn unit_rat(rng: &mut impl Rng, max_denom: u32) -> Rat {
    let denom = rng.gen_range(1..=max_denom.max(1));
    let numer = rng.gen_range(0..=denom);
    Rat::new(numer as i64, denom as i64)
}

/// A distribution over a random nonempty subset of `0..n_states`, built from
/// integer weights in `1..=max_weight` and normalized exactly.
pub fn distribution(rng: &mut impl Rng, n_states: usize, max_weight: u32) -> Distribution {
    let support_size = rng.gen_range(1..=n_states);
    let mut states: Vec<StateId> = (0..n_states).collect();
    for i in 0..support_size {
        let j = rng.gen_range(i..n_states);
        states.swap(i, j);
    }
    let weights: Vec<u32> = (0..support_size)
        .map(|_| rng.gen_range(1..=max_weight.max(1)))
        .collect();
    let total: u32 = weights.iter().sum();
    let map: BTreeMap<StateId, Rat> = states[..support_size]
        .iter()
        .zip(&weights)
        .map(|(&s, &w)| (s, Rat::new(w as i64, total as i64)))
        .collect();
    Distribution::new(map).expect("normalized weights form a distribution")
}

pub fn generator_set(
    rng: &mut impl Rng,
    n_states: usize,
    max_generators: usize,
    max_weight: u32,
) -> GeneratorSet {
    let count = rng.gen_range(1..=max_generators.max(1));
    GeneratorSet::new(
        (0..count)
            .map(|_| distribution(rng, n_states, max_weight))
            .collect(),
    )
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// A valid NPA with `n_states` states over the given alphabet, at most
/// `max_generators` generators per transition.
pub fn npa(
    rng: &mut impl Rng,
    n_states: usize,
    alphabet: &[&str],
    max_generators: usize,
) -> Npa {
    let transitions = (0..n_states)
        .map(|_| {
            (0..alphabet.len())
                .map(|_| generator_set(rng, n_states, max_generators, 4))
                .collect()
        })
        .collect();
    Npa::new(
        names("s", n_states),
        alphabet.iter().map(|s| s.to_string()).collect(),
        rng.gen_range(0..n_states),
        (0..n_states).map(|_| unit_rat(rng, 4)).collect(),
        transitions,
    )
    .expect("generated automaton is valid")
}

/// A valid DPA with `n_states` states over the given alphabet.
pub fn dpa(rng: &mut impl Rng, n_states: usize, alphabet: &[&str]) -> Dpa {
    let transitions = (0..n_states)
        .map(|_| {
            (0..alphabet.len())
                .map(|_| distribution(rng, n_states, 4))
                .collect()
        })
        .collect();
    Dpa::new(
        names("s", n_states),
        alphabet.iter().map(|s| s.to_string()).collect(),
        rng.gen_range(0..n_states),
        (0..n_states).map(|_| unit_rat(rng, 4)).collect(),
        transitions,
    )
    .expect("generated automaton is valid")
}

/// A unary WFA with entries in `[-max_abs, max_abs]` over small denominators.
pub fn unary_wfa(rng: &mut impl Rng, n_states: usize, max_abs: i64) -> Wfa {
    let value = |rng: &mut dyn rand::RngCore| {
        let denom = rng.gen_range(1..=4i64);
        let numer = rng.gen_range(-max_abs * denom..=max_abs * denom);
        Rat::new(numer, denom)
    };
    let matrix = (0..n_states)
        .map(|_| (0..n_states).map(|_| value(rng)).collect())
        .collect();
    Wfa::new(
        names("s", n_states),
        vec!["a".to_string()],
        (0..n_states).map(|_| value(rng)).collect(),
        (0..n_states).map(|_| value(rng)).collect(),
        vec![matrix],
    )
    .expect("generated automaton is valid")
}
