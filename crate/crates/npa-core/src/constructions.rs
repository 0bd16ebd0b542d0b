//! Ready-made automata and transforms: the four-state example whose min
//! semantics tracks the longest run of `a`s, the output-complement duality,
//! the threshold-to-equivalence reduction, and the bounded cosine-like
//! recurrence used by the unary separation argument.

use crate::automata::{Distribution, Dpa, GeneratorSet, Npa, SymbolId, ValidationError};
use crate::lrs::{Lrs, LrsError};
use crate::rat::Rat;
use crate::semantics::EvalError;

/// The running example: over `{a, b}`, the min semantics assigns each word
/// `2^-n` where `n` is its longest run of `a`s, and the max semantics
/// assigns 1 everywhere.
pub fn example_npa() -> Npa {
    let half_s1_s2 = Distribution::from_pairs([(1, Rat::new(1, 2)), (2, Rat::new(1, 2))])
        .expect("valid generator");
    let point = Distribution::point;
    Npa::new(
        vec!["s0".into(), "s1".into(), "s2".into(), "s3".into()],
        vec!["a".into(), "b".into()],
        0,
        vec![Rat::one(), Rat::zero(), Rat::one(), Rat::one()],
        vec![
            // s0: stay put, or on `a` additionally split onto s1/s2.
            vec![
                GeneratorSet::new(vec![point(0), half_s1_s2.clone()]),
                GeneratorSet::singleton(point(0)),
            ],
            // s1: absorbing.
            vec![
                GeneratorSet::singleton(point(1)),
                GeneratorSet::singleton(point(1)),
            ],
            // s2: keep splitting on `a`, escape to s3 on `b`.
            vec![
                GeneratorSet::singleton(half_s1_s2),
                GeneratorSet::singleton(point(3)),
            ],
            // s3: absorbing.
            vec![
                GeneratorSet::singleton(point(3)),
                GeneratorSet::singleton(point(3)),
            ],
        ],
    )
    .expect("example automaton is valid")
}

/// Reference evaluator for the example's min language: `2^-n` for the
/// longest run of symbol 0 (`a`). Words use the example's symbol indexing;
/// only symbols 0 and 1 are allowed.
pub fn longest_run_reference(word: &[SymbolId]) -> Result<Rat, EvalError> {
    let mut longest = 0usize;
    let mut current = 0usize;
    for &sym in word {
        match sym {
            0 => {
                current += 1;
                longest = longest.max(current);
            }
            1 => current = 0,
            other => return Err(EvalError::UnknownSymbol(format!("#{other}"))),
        }
    }
    Ok(Rat::new(1, num::BigInt::from(1) << longest))
}

/// Complements every output weight, leaving the transition structure alone.
/// Swaps the two semantics: the max language of the dual is one minus the
/// min language of the original, and vice versa.
pub fn dualize(a: &Npa) -> Npa {
    Npa {
        states: a.states.clone(),
        alphabet: a.alphabet.clone(),
        initial: a.initial,
        output: a.output.iter().map(|w| Rat::one() - w).collect(),
        transitions: a.transitions.clone(),
    }
}

/// Encodes the threshold problem for `x` at `kappa` as an equivalence of two
/// NPAs `(Y, Z)`.
///
/// `Y` starts in a fresh `kappa`-output state that, on every symbol, chooses
/// between a `kappa`-output sink and a disjoint copy of `x`; `Z` is the
/// single `kappa`-output looping state. Under min, `Y` and `Z` agree iff
/// `x` stays at or above `kappa` on every word; under max, iff it stays at
/// or below.
pub fn threshold_reduction(x: &Dpa, kappa: &Rat) -> Result<(Npa, Npa), ValidationError> {
    if !kappa.is_probability() {
        return Err(ValidationError::ThresholdRange(kappa.clone()));
    }
    let n_symbols = x.alphabet.len();

    let mut states = vec!["q0".to_string(), "qsink".to_string()];
    states.extend(x.states.iter().map(|s| format!("x_{s}")));
    let offset = 2;

    let mut output = vec![kappa.clone(), kappa.clone()];
    output.extend(x.output.iter().cloned());

    let branch = GeneratorSet::new(vec![
        Distribution::point(1),
        Distribution::point(offset + x.initial),
    ]);
    let mut transitions = vec![
        vec![branch; n_symbols],
        vec![GeneratorSet::singleton(Distribution::point(1)); n_symbols],
    ];
    for row in &x.transitions {
        transitions.push(
            row.iter()
                .map(|d| {
                    let shifted = Distribution::from_pairs(
                        d.weights.iter().map(|(&s, w)| (s + offset, w.clone())),
                    )
                    .expect("shifting preserves the distribution");
                    GeneratorSet::singleton(shifted)
                })
                .collect(),
        );
    }

    let y = Npa::new(states, x.alphabet.clone(), 0, output, transitions)?;
    let z = Npa::new(
        vec!["q0".to_string()],
        x.alphabet.clone(),
        0,
        vec![kappa.clone()],
        vec![vec![GeneratorSet::singleton(Distribution::point(0)); n_symbols]],
    )?;
    Ok((y, z))
}

/// The order-2 recurrence of the real parts of powers of `aa + bb*i` on the
/// unit circle: `x_{n+2} = 2*aa*x_{n+1} - x_n` with `x_0 = 1`, `x_1 = aa`.
pub fn real_part_lrs(aa: &Rat, bb: &Rat) -> Result<Lrs, LrsError> {
    if aa.is_zero() || bb.is_zero() {
        return Err(LrsError::ZeroParameter);
    }
    let norm = &(aa * aa) + &(bb * bb);
    if norm != Rat::one() {
        return Err(LrsError::NotOnUnitCircle(norm));
    }
    Lrs::new(
        vec![Rat::one(), aa.clone()],
        vec![-norm, Rat::from_int(2) * aa],
    )
}
