//! Automaton descriptions over exact rationals.
//!
//! Three automaton kinds share a state/alphabet layout: [`Npa`] transitions
//! into finitely generated convex sets of distributions, [`Dpa`] into single
//! distributions, and [`Wfa`] carries arbitrary weight vectors and one matrix
//! per symbol. State and symbol names are strings in the external format and
//! dense indices internally.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::rat::Rat;

/// Dense index of a state within an automaton.
pub type StateId = usize;
/// Dense index of a symbol within an alphabet.
pub type SymbolId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("no states")]
    NoStates,
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("initial state index {0} out of range")]
    InitialOutOfRange(StateId),
    #[error("expected {expected} output weights, found {found}")]
    OutputLength { expected: usize, found: usize },
    #[error("output weight {value} of state {state:?} outside [0,1]")]
    OutputRange { state: String, value: Rat },
    #[error("missing transition for state {state:?} on symbol {symbol:?}")]
    MissingTransition { state: String, symbol: String },
    #[error("empty convex set for state {state:?} on symbol {symbol:?}")]
    EmptyConvexSet { state: String, symbol: String },
    #[error("not a distribution: weights sum to {sum}, expected 1")]
    NotADistribution { sum: Rat },
    #[error("negative weight {weight} on state index {state}")]
    NegativeWeight { state: StateId, weight: Rat },
    #[error("empty distribution")]
    EmptyDistribution,
    #[error("state index {0} out of range")]
    StateOutOfRange(StateId),
    #[error("weight vector length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("matrix for symbol {symbol:?} is not {n}x{n}")]
    MatrixShape { symbol: String, n: usize },
    #[error("threshold {0} outside [0,1]")]
    ThresholdRange(Rat),
}

/// A finite-support probability distribution over state indices.
///
/// Zero weights are never stored, so structural equality coincides with
/// equality of distributions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Distribution {
    pub weights: BTreeMap<StateId, Rat>,
}

impl Distribution {
    pub fn new(weights: BTreeMap<StateId, Rat>) -> Result<Self, ValidationError> {
        let d = Distribution {
            weights: weights.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        };
        d.check()?;
        Ok(d)
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, ValidationError>
    where
        I: IntoIterator<Item = (StateId, Rat)>,
    {
        let mut weights: BTreeMap<StateId, Rat> = BTreeMap::new();
        for (s, w) in pairs {
            let entry = weights.entry(s).or_insert_with(Rat::zero);
            *entry = &*entry + &w;
        }
        Distribution::new(weights)
    }

    /// The point distribution at `state`.
    pub fn point(state: StateId) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(state, Rat::one());
        Distribution { weights }
    }

    /// Re-checks the distribution invariants: nonempty support, weights > 0
    /// as stored (zero weights are dropped), total exactly 1.
    pub fn check(&self) -> Result<(), ValidationError> {
        if self.weights.is_empty() {
            return Err(ValidationError::EmptyDistribution);
        }
        let mut sum = Rat::zero();
        for (&s, w) in &self.weights {
            if w.is_negative() {
                return Err(ValidationError::NegativeWeight {
                    state: s,
                    weight: w.clone(),
                });
            }
            sum += w;
        }
        if sum != Rat::one() {
            return Err(ValidationError::NotADistribution { sum });
        }
        Ok(())
    }

    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.weights.keys().copied()
    }

    pub fn weight(&self, state: StateId) -> Rat {
        self.weights.get(&state).cloned().unwrap_or_else(Rat::zero)
    }

    /// Expected value of `f` under this distribution.
    pub fn expectation(&self, mut f: impl FnMut(StateId) -> Rat) -> Rat {
        self.weights.iter().map(|(&s, w)| w * &f(s)).sum()
    }

    pub fn max_state(&self) -> Option<StateId> {
        self.weights.keys().next_back().copied()
    }
}

/// A finite nonempty list of distributions standing for their convex hull.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorSet {
    pub generators: Vec<Distribution>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<Distribution>) -> Self {
        GeneratorSet { generators }
    }

    pub fn singleton(d: Distribution) -> Self {
        GeneratorSet {
            generators: vec![d],
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A nondeterministic probabilistic automaton: each transition yields a
/// finitely generated nonempty convex set of distributions over states, and
/// each state has an output weight in `[0,1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Npa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: StateId,
    pub output: Vec<Rat>,
    /// Indexed `[state][symbol]`.
    pub transitions: Vec<Vec<GeneratorSet>>,
}

/// A deterministic probabilistic automaton: one distribution per transition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dpa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: StateId,
    pub output: Vec<Rat>,
    /// Indexed `[state][symbol]`.
    pub transitions: Vec<Vec<Distribution>>,
}

/// A weighted finite automaton: initial and output weight vectors plus one
/// square matrix per symbol. No sign or stochasticity constraint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wfa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial_vector: Vec<Rat>,
    pub output_vector: Vec<Rat>,
    /// Indexed `[symbol][row][column]`.
    pub matrices: Vec<Vec<Vec<Rat>>>,
}

/// Names must survive the line-oriented external format unchanged.
fn check_name(name: &str) -> Result<(), ValidationError> {
    let ok = !name.is_empty()
        && !name.starts_with('#')
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '{' | '}' | '=' | ':' | ';'));
    if ok {
        Ok(())
    } else {
        Err(ValidationError::InvalidName(name.to_string()))
    }
}

fn check_names(names: &[String]) -> Result<(), ValidationError> {
    for (i, name) in names.iter().enumerate() {
        check_name(name)?;
        if names[..i].contains(name) {
            return Err(ValidationError::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

fn check_shared_header(
    states: &[String],
    alphabet: &[String],
    initial: StateId,
    output: &[Rat],
) -> Result<(), ValidationError> {
    if states.is_empty() {
        return Err(ValidationError::NoStates);
    }
    if alphabet.is_empty() {
        return Err(ValidationError::EmptyAlphabet);
    }
    check_names(states)?;
    check_names(alphabet)?;
    if initial >= states.len() {
        return Err(ValidationError::InitialOutOfRange(initial));
    }
    if output.len() != states.len() {
        return Err(ValidationError::OutputLength {
            expected: states.len(),
            found: output.len(),
        });
    }
    for (s, value) in states.iter().zip(output) {
        if !value.is_probability() {
            return Err(ValidationError::OutputRange {
                state: s.clone(),
                value: value.clone(),
            });
        }
    }
    Ok(())
}

fn check_support(d: &Distribution, n_states: usize) -> Result<(), ValidationError> {
    match d.max_state() {
        Some(s) if s >= n_states => Err(ValidationError::StateOutOfRange(s)),
        _ => Ok(()),
    }
}

impl Npa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: StateId,
        output: Vec<Rat>,
        transitions: Vec<Vec<GeneratorSet>>,
    ) -> Result<Self, ValidationError> {
        let a = Npa {
            states,
            alphabet,
            initial,
            output,
            transitions,
        };
        a.validate()?;
        Ok(a)
    }

    /// Checks every invariant, reporting the first violation: well-formed
    /// header, a transition for every (state, symbol) pair, nonempty
    /// generator sets, and generators that are genuine distributions over
    /// the state set.
    pub fn validate(&self) -> Result<(), ValidationError> {
        check_shared_header(&self.states, &self.alphabet, self.initial, &self.output)?;
        for (s, state) in self.states.iter().enumerate() {
            let row = self.transitions.get(s);
            for (a, symbol) in self.alphabet.iter().enumerate() {
                let set = row.and_then(|r| r.get(a)).ok_or_else(|| {
                    ValidationError::MissingTransition {
                        state: state.clone(),
                        symbol: symbol.clone(),
                    }
                })?;
                if set.is_empty() {
                    return Err(ValidationError::EmptyConvexSet {
                        state: state.clone(),
                        symbol: symbol.clone(),
                    });
                }
                for g in &set.generators {
                    g.check()?;
                    check_support(g, self.states.len())?;
                }
            }
        }
        Ok(())
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name)
    }
}

impl Dpa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: StateId,
        output: Vec<Rat>,
        transitions: Vec<Vec<Distribution>>,
    ) -> Result<Self, ValidationError> {
        let d = Dpa {
            states,
            alphabet,
            initial,
            output,
            transitions,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        check_shared_header(&self.states, &self.alphabet, self.initial, &self.output)?;
        for (s, state) in self.states.iter().enumerate() {
            let row = self.transitions.get(s);
            for (a, symbol) in self.alphabet.iter().enumerate() {
                let d = row.and_then(|r| r.get(a)).ok_or_else(|| {
                    ValidationError::MissingTransition {
                        state: state.clone(),
                        symbol: symbol.clone(),
                    }
                })?;
                d.check()?;
                check_support(d, self.states.len())?;
            }
        }
        Ok(())
    }

    /// Embeds into an NPA by wrapping each transition distribution as a
    /// singleton generator set.
    pub fn to_npa(&self) -> Npa {
        Npa {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            initial: self.initial,
            output: self.output.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|d| GeneratorSet::singleton(d.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    /// Renders as a weighted automaton: unit coordinate initial vector, the
    /// output map as the output vector, and one row-stochastic matrix per
    /// symbol.
    pub fn to_wfa(&self) -> Wfa {
        let n = self.states.len();
        let mut initial_vector = vec![Rat::zero(); n];
        initial_vector[self.initial] = Rat::one();
        let matrices = self
            .alphabet
            .iter()
            .enumerate()
            .map(|(a, _)| {
                (0..n)
                    .map(|s| {
                        let d = &self.transitions[s][a];
                        (0..n).map(|t| d.weight(t)).collect()
                    })
                    .collect()
            })
            .collect();
        Wfa {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            initial_vector,
            output_vector: self.output.clone(),
            matrices,
        }
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name)
    }
}

impl Wfa {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial_vector: Vec<Rat>,
        output_vector: Vec<Rat>,
        matrices: Vec<Vec<Vec<Rat>>>,
    ) -> Result<Self, ValidationError> {
        let w = Wfa {
            states,
            alphabet,
            initial_vector,
            output_vector,
            matrices,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.states.is_empty() {
            return Err(ValidationError::NoStates);
        }
        if self.alphabet.is_empty() {
            return Err(ValidationError::EmptyAlphabet);
        }
        check_names(&self.states)?;
        check_names(&self.alphabet)?;
        let n = self.states.len();
        for v in [&self.initial_vector, &self.output_vector] {
            if v.len() != n {
                return Err(ValidationError::VectorLength {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        if self.matrices.len() != self.alphabet.len() {
            return Err(ValidationError::MissingTransition {
                state: String::new(),
                symbol: self
                    .alphabet
                    .get(self.matrices.len())
                    .cloned()
                    .unwrap_or_default(),
            });
        }
        for (a, m) in self.matrices.iter().enumerate() {
            let square = m.len() == n && m.iter().all(|row| row.len() == n);
            if !square {
                return Err(ValidationError::MatrixShape {
                    symbol: self.alphabet[a].clone(),
                    n,
                });
            }
        }
        Ok(())
    }

    pub fn symbol_index(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example_npa;

    fn dist(pairs: &[(StateId, (i64, i64))]) -> Distribution {
        Distribution::from_pairs(pairs.iter().map(|&(s, (n, d))| (s, Rat::new(n, d)))).unwrap()
    }

    #[test]
    fn point_distribution_is_valid() {
        let d = Distribution::point(3);
        d.check().unwrap();
        assert_eq!(d.weight(3), Rat::one());
        assert_eq!(d.weight(0), Rat::zero());
    }

    #[test]
    fn zero_weights_are_dropped() {
        let d = Distribution::from_pairs([(0, Rat::one()), (1, Rat::zero())]).unwrap();
        assert_eq!(d, Distribution::point(0));
    }

    #[test]
    fn non_unit_sum_rejected() {
        let err = Distribution::from_pairs([(0, Rat::new(9, 10))]).unwrap_err();
        assert_eq!(
            err,
            ValidationError::NotADistribution {
                sum: Rat::new(9, 10)
            }
        );
    }

    #[test]
    fn negative_weight_rejected() {
        let err =
            Distribution::from_pairs([(0, Rat::new(3, 2)), (1, Rat::new(-1, 2))]).unwrap_err();
        assert!(matches!(err, ValidationError::NegativeWeight { .. }));
    }

    #[test]
    fn example_automaton_is_valid() {
        example_npa().validate().unwrap();
    }

    #[test]
    fn empty_generator_set_rejected() {
        let mut a = example_npa();
        a.transitions[0][0] = GeneratorSet::new(vec![]);
        assert!(matches!(
            a.validate(),
            Err(ValidationError::EmptyConvexSet { .. })
        ));
    }

    #[test]
    fn missing_transition_rejected() {
        let mut a = example_npa();
        a.transitions[2].pop();
        assert!(matches!(
            a.validate(),
            Err(ValidationError::MissingTransition { .. })
        ));
    }

    #[test]
    fn non_stochastic_generator_rejected() {
        let mut a = example_npa();
        a.transitions[0][0].generators[0]
            .weights
            .insert(1, Rat::new(1, 7));
        assert!(matches!(
            a.validate(),
            Err(ValidationError::NotADistribution { .. })
        ));
    }

    #[test]
    fn output_out_of_range_rejected() {
        let mut a = example_npa();
        a.output[1] = Rat::new(3, 2);
        assert!(matches!(
            a.validate(),
            Err(ValidationError::OutputRange { .. })
        ));
    }

    #[test]
    fn dpa_embedding_yields_singletons() {
        let d = Dpa::new(
            vec!["s0".into(), "s1".into()],
            vec!["a".into()],
            0,
            vec![Rat::one(), Rat::zero()],
            vec![
                vec![dist(&[(0, (1, 2)), (1, (1, 2))])],
                vec![Distribution::point(1)],
            ],
        )
        .unwrap();
        let a = d.to_npa();
        a.validate().unwrap();
        assert!(a
            .transitions
            .iter()
            .flatten()
            .all(|set| set.generators.len() == 1));
        assert_eq!(
            a.transitions[0][0].generators[0],
            dist(&[(0, (1, 2)), (1, (1, 2))])
        );
    }

    #[test]
    fn dpa_as_wfa_is_row_stochastic() {
        let d = Dpa::new(
            vec!["s0".into(), "s1".into()],
            vec!["a".into()],
            1,
            vec![Rat::new(1, 3), Rat::one()],
            vec![
                vec![dist(&[(0, (1, 2)), (1, (1, 2))])],
                vec![Distribution::point(0)],
            ],
        )
        .unwrap();
        let w = d.to_wfa();
        w.validate().unwrap();
        assert_eq!(w.initial_vector, vec![Rat::zero(), Rat::one()]);
        assert_eq!(w.output_vector, d.output);
        for m in &w.matrices {
            for row in m {
                assert_eq!(row.iter().cloned().sum::<Rat>(), Rat::one());
            }
        }
    }

    #[test]
    fn one_state_dpa_as_wfa() {
        let d = Dpa::new(
            vec!["s".into()],
            vec!["a".into()],
            0,
            vec![Rat::new(2, 5)],
            vec![vec![Distribution::point(0)]],
        )
        .unwrap();
        let w = d.to_wfa();
        assert_eq!(w.matrices[0], vec![vec![Rat::one()]]);
        assert_eq!(w.initial_vector, vec![Rat::one()]);
        assert_eq!(w.output_vector, vec![Rat::new(2, 5)]);
    }
}
