//! Linear recurrence sequences over exact rationals.
//!
//! An order-`k` sequence is `u_{n+k} = coeffs[k-1]*u_{n+k-1} + ... +
//! coeffs[0]*u_n` from `k` initial values. Unary weighted automata map onto
//! these via the characteristic polynomial of their transition matrix.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automata::Wfa;
use crate::rat::Rat;
use crate::semantics::evaluate_wfa;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LrsError {
    #[error("initial values and coefficients must have equal nonzero length")]
    BadShape,
    #[error("alphabet has {0} symbols, expected exactly one")]
    NonUnaryAlphabet(usize),
    #[error("aa^2 + bb^2 = {0}, expected 1")]
    NotOnUnitCircle(Rat),
    #[error("parameters must be nonzero")]
    ZeroParameter,
    #[error("invalid lrs form: {0}")]
    Parse(String),
}

/// An order-`k` linear recurrence sequence: `k` initial values and `k`
/// recurrence coefficients, lowest index first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lrs {
    pub initial: Vec<Rat>,
    pub coeffs: Vec<Rat>,
}

impl Lrs {
    pub fn new(initial: Vec<Rat>, coeffs: Vec<Rat>) -> Result<Self, LrsError> {
        if initial.is_empty() || initial.len() != coeffs.len() {
            return Err(LrsError::BadShape);
        }
        Ok(Lrs { initial, coeffs })
    }

    pub fn order(&self) -> usize {
        self.initial.len()
    }
}

/// `u_n`, by iterating the recurrence.
pub fn lrs_eval(l: &Lrs, n: usize) -> Rat {
    let k = l.order();
    if n < k {
        return l.initial[n].clone();
    }
    let mut window = l.initial.clone();
    for _ in k..=n {
        let next: Rat = l.coeffs.iter().zip(&window).map(|(b, u)| b * u).sum();
        window.rotate_left(1);
        window[k - 1] = next;
    }
    window[k - 1].clone()
}

/// The sequence `alpha*l1 + beta*l2`, of order `l1.order() + l2.order()`:
/// the recurrence is read off the characteristic polynomial of the direct
/// sum of the two companion matrices, and the initial values are the
/// pointwise combination.
pub fn lrs_combine(alpha: &Rat, l1: &Lrs, beta: &Rat, l2: &Lrs) -> Lrs {
    let k1 = l1.order();
    let k2 = l2.order();
    let k = k1 + k2;
    let mut m = vec![vec![Rat::zero(); k]; k];
    for (offset, l) in [(0, l1), (k1, l2)] {
        let kk = l.order();
        for i in 0..kk.saturating_sub(1) {
            m[offset + i][offset + i + 1] = Rat::one();
        }
        for (j, b) in l.coeffs.iter().enumerate() {
            m[offset + kk - 1][offset + j] = b.clone();
        }
    }
    let char_poly = characteristic_polynomial(&m);
    let coeffs = char_poly.into_iter().map(|a| -a).collect();
    let initial = (0..k)
        .map(|n| alpha * &lrs_eval(l1, n) + beta * &lrs_eval(l2, n))
        .collect();
    Lrs { initial, coeffs }
}

/// Low-order coefficients `a_0..a_{n-1}` of the monic characteristic
/// polynomial `x^n + a_{n-1} x^{n-1} + ... + a_0`, by the Faddeev–LeVerrier
/// recurrence (exact: the only divisions are by integers).
fn characteristic_polynomial(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut a = vec![Rat::zero(); n];
    let mut power = m.to_vec();
    for k in 1..=n {
        let trace: Rat = (0..n).map(|i| power[i][i].clone()).sum();
        let c = -(trace / Rat::from_int(k as i64));
        a[n - k] = c.clone();
        if k == n {
            break;
        }
        for (i, row) in power.iter_mut().enumerate() {
            row[i] = &row[i] + &c;
        }
        power = mat_mul(m, &power);
    }
    a
}

fn mat_mul(x: &[Vec<Rat>], y: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = x.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for kk in 0..n {
            if x[i][kk].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[kk][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&x[i][kk] * &y[kk][j]);
                }
            }
        }
    }
    out
}

/// The weight sequence of a unary weighted automaton as an LRS of order
/// equal to the state count: coefficients from the characteristic polynomial
/// of the transition matrix, initial values from the first `n` word weights.
pub fn wfa_to_lrs(w: &Wfa) -> Result<Lrs, LrsError> {
    if w.alphabet.len() != 1 {
        return Err(LrsError::NonUnaryAlphabet(w.alphabet.len()));
    }
    let n = w.states.len();
    let char_poly = characteristic_polynomial(&w.matrices[0]);
    let coeffs = char_poly.into_iter().map(|a| -a).collect();
    let initial = (0..n)
        .map(|i| evaluate_wfa(w, &vec![0; i]).expect("unary word"))
        .collect();
    Ok(Lrs { initial, coeffs })
}

/// All indices `n <= bound` with `u_n = 0`, by exact comparison.
pub fn zero_set_prefix(l: &Lrs, bound: usize) -> Vec<usize> {
    let k = l.order();
    let mut window = l.initial.clone();
    let mut zeros = Vec::new();
    for n in 0..=bound {
        let value = if n < k {
            l.initial[n].clone()
        } else {
            let next: Rat = l.coeffs.iter().zip(&window).map(|(b, u)| b * u).sum();
            window.rotate_left(1);
            window[k - 1] = next.clone();
            next
        };
        if value.is_zero() {
            zeros.push(n);
        }
    }
    zeros
}

impl fmt::Display for Lrs {
    /// Textual form `lrs k=2 init=0,1 coeffs=1,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Rat]| {
            xs.iter()
                .map(Rat::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "lrs k={} init={} coeffs={}",
            self.order(),
            join(&self.initial),
            join(&self.coeffs)
        )
    }
}

impl FromStr for Lrs {
    type Err = LrsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LrsError::Parse(s.to_string());
        let mut tokens = s.split_whitespace();
        if tokens.next() != Some("lrs") {
            return Err(bad());
        }
        let mut order = None;
        let mut initial = None;
        let mut coeffs = None;
        for tok in tokens {
            let (key, value) = tok.split_once('=').ok_or_else(bad)?;
            let parse_list = |v: &str| -> Result<Vec<Rat>, LrsError> {
                v.split(',').map(|x| x.parse().map_err(|_| bad())).collect()
            };
            match key {
                "k" => order = Some(value.parse::<usize>().map_err(|_| bad())?),
                "init" => initial = Some(parse_list(value)?),
                "coeffs" => coeffs = Some(parse_list(value)?),
                _ => return Err(bad()),
            }
        }
        let (Some(order), Some(initial), Some(coeffs)) = (order, initial, coeffs) else {
            return Err(bad());
        };
        if initial.len() != order || coeffs.len() != order {
            return Err(bad());
        }
        Lrs::new(initial, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fibonacci() -> Lrs {
        Lrs::new(
            vec![Rat::zero(), Rat::one()],
            vec![Rat::one(), Rat::one()],
        )
        .unwrap()
    }

    fn fib_wfa() -> Wfa {
        Wfa::new(
            vec!["s0".into(), "s1".into()],
            vec!["a".into()],
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
            vec![vec![
                vec![Rat::one(), Rat::one()],
                vec![Rat::one(), Rat::zero()],
            ]],
        )
        .unwrap()
    }

    #[test]
    fn fibonacci_eval() {
        let fib = fibonacci();
        assert_eq!(lrs_eval(&fib, 0), Rat::zero());
        assert_eq!(lrs_eval(&fib, 1), Rat::one());
        assert_eq!(lrs_eval(&fib, 10), Rat::from_int(55));
    }

    #[test]
    fn constant_sequence() {
        let c = Lrs::new(vec![Rat::new(2, 7)], vec![Rat::one()]).unwrap();
        for n in 0..10 {
            assert_eq!(lrs_eval(&c, n), Rat::new(2, 7));
        }
    }

    #[test]
    fn combine_is_pointwise_linear() {
        let fib = fibonacci();
        let c = Lrs::new(vec![Rat::new(1, 3)], vec![Rat::one()]).unwrap();
        let combined = lrs_combine(&Rat::from_int(2), &fib, &Rat::from_int(-3), &c);
        assert_eq!(combined.order(), 3);
        for n in 0..=20 {
            let expect = Rat::from_int(2) * lrs_eval(&fib, n) + Rat::from_int(-3) * lrs_eval(&c, n);
            assert_eq!(lrs_eval(&combined, n), expect, "n = {n}");
        }
    }

    #[test]
    fn combine_identity_and_cancellation() {
        let fib = fibonacci();
        let id = lrs_combine(&Rat::one(), &fib, &Rat::zero(), &fib);
        let diff = lrs_combine(&Rat::one(), &fib, &Rat::from_int(-1), &fib);
        for n in 0..=20 {
            assert_eq!(lrs_eval(&id, n), lrs_eval(&fib, n));
            assert_eq!(lrs_eval(&diff, n), Rat::zero());
        }
    }

    #[test]
    fn fibonacci_from_wfa() {
        let l = wfa_to_lrs(&fib_wfa()).unwrap();
        assert_eq!(l.coeffs, vec![Rat::one(), Rat::one()]);
        let fib = fibonacci();
        for n in 0..=10 {
            assert_eq!(lrs_eval(&l, n), lrs_eval(&fib, n));
        }
    }

    #[test]
    fn scalar_wfa_is_geometric() {
        let w = Wfa::new(
            vec!["s".into()],
            vec!["a".into()],
            vec![Rat::one()],
            vec![Rat::new(2, 3)],
            vec![vec![vec![Rat::new(1, 2)]]],
        )
        .unwrap();
        let l = wfa_to_lrs(&w).unwrap();
        assert_eq!(l.initial, vec![Rat::new(2, 3)]);
        assert_eq!(l.coeffs, vec![Rat::new(1, 2)]);
        assert_eq!(lrs_eval(&l, 4), Rat::new(2, 3) * Rat::new(1, 16));
    }

    #[test]
    fn identity_wfa_is_constant() {
        let w = Wfa::new(
            vec!["s0".into(), "s1".into()],
            vec!["a".into()],
            vec![Rat::new(1, 4), Rat::new(1, 2)],
            vec![Rat::one(), Rat::from_int(2)],
            vec![vec![
                vec![Rat::one(), Rat::zero()],
                vec![Rat::zero(), Rat::one()],
            ]],
        )
        .unwrap();
        let l = wfa_to_lrs(&w).unwrap();
        let uv = Rat::new(1, 4) + Rat::one();
        for n in 0..=10 {
            assert_eq!(lrs_eval(&l, n), uv);
        }
    }

    #[test]
    fn non_unary_rejected() {
        let w = Wfa::new(
            vec!["s".into()],
            vec!["a".into(), "b".into()],
            vec![Rat::one()],
            vec![Rat::one()],
            vec![vec![vec![Rat::one()]], vec![vec![Rat::one()]]],
        )
        .unwrap();
        assert_eq!(wfa_to_lrs(&w), Err(LrsError::NonUnaryAlphabet(2)));
    }

    #[test]
    fn zero_sets() {
        let zero = Lrs::new(vec![Rat::zero()], vec![Rat::one()]).unwrap();
        assert_eq!(zero_set_prefix(&zero, 5), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(zero_set_prefix(&fibonacci(), 10), vec![0]);
    }

    #[test]
    fn textual_form_roundtrip() {
        let fib = fibonacci();
        assert_eq!(fib.to_string(), "lrs k=2 init=0,1 coeffs=1,1");
        assert_eq!("lrs k=2 init=0,1 coeffs=1,1".parse::<Lrs>().unwrap(), fib);
        let l = Lrs::new(
            vec![Rat::one(), Rat::new(3, 5)],
            vec![Rat::from_int(-1), Rat::new(6, 5)],
        )
        .unwrap();
        assert_eq!(l.to_string().parse::<Lrs>().unwrap(), l);
        assert!("lrs k=2 init=0,1 coeffs=1".parse::<Lrs>().is_err());
        assert!("k=1 init=0 coeffs=1".parse::<Lrs>().is_err());
    }
}
