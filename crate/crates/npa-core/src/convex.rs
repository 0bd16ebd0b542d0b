//! Exact operations on finitely generated convex subsets of the probability
//! simplex: convex combinations, hull-membership via an exact-rational LP,
//! and generator-set minimization.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automata::{Distribution, GeneratorSet, StateId};
use crate::rat::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvexError {
    #[error("{coeffs} coefficients for {points} points")]
    LengthMismatch { coeffs: usize, points: usize },
    #[error("coefficient {0} is negative")]
    NegativeCoefficient(Rat),
    #[error("coefficients sum to {0}, expected 1")]
    CoefficientSum(Rat),
}

/// Coefficients of a convex combination: nonnegative, summing to exactly 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvexCombination {
    pub coefficients: Vec<Rat>,
}

impl ConvexCombination {
    pub fn new(coefficients: Vec<Rat>) -> Result<Self, ConvexError> {
        let mut sum = Rat::zero();
        for c in &coefficients {
            if c.is_negative() {
                return Err(ConvexError::NegativeCoefficient(c.clone()));
            }
            sum += c;
        }
        if sum != Rat::one() {
            return Err(ConvexError::CoefficientSum(sum));
        }
        Ok(ConvexCombination { coefficients })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// The convex combination `sum_i coeffs[i] * points[i]`.
///
/// Satisfies the projection axiom (coefficient 1 on index `j` returns
/// `points[j]`) and the barycenter axiom (nested mixes flatten with
/// multiplied coefficients).
pub fn mix(
    coeffs: &ConvexCombination,
    points: &[Distribution],
) -> Result<Distribution, ConvexError> {
    if coeffs.len() != points.len() {
        return Err(ConvexError::LengthMismatch {
            coeffs: coeffs.len(),
            points: points.len(),
        });
    }
    let mut weights: BTreeMap<StateId, Rat> = BTreeMap::new();
    for (c, p) in coeffs.coefficients.iter().zip(points) {
        if c.is_zero() {
            continue;
        }
        for (&s, w) in &p.weights {
            let entry = weights.entry(s).or_insert_with(Rat::zero);
            *entry = &*entry + &(c * w);
        }
    }
    weights.retain(|_, w| !w.is_zero());
    Ok(Distribution { weights })
}

/// Does `d` lie in the convex hull of `gs`?
///
/// Decided exactly: feasibility of `exists c >= 0, sum c = 1,
/// sum_i c_i * gs[i](s) = d(s)` for every state `s`, via phase-1 simplex.
pub fn is_redundant(d: &Distribution, gs: &[Distribution]) -> bool {
    let refs: Vec<&Distribution> = gs.iter().collect();
    membership(d, &refs)
}

fn membership(d: &Distribution, gs: &[&Distribution]) -> bool {
    if gs.is_empty() {
        return false;
    }
    if gs.iter().any(|g| *g == d) {
        return true;
    }
    if gs.len() == 1 {
        // The hull of one point is that point.
        return false;
    }
    let mut states: Vec<StateId> = d.support().collect();
    for g in gs {
        states.extend(g.support());
    }
    states.sort_unstable();
    states.dedup();

    // Sound rejection before the LP: every hull point stays inside the
    // per-state bounding box of the generators.
    for &s in &states {
        let w = d.weight(s);
        if gs.iter().all(|g| g.weight(s) < w) || gs.iter().all(|g| g.weight(s) > w) {
            return false;
        }
    }

    // One equality row per state in any support, plus the simplex row.

    let rows = states.len() + 1;
    let cols = gs.len();
    let mut a = vec![vec![Rat::zero(); cols]; rows];
    let mut b = vec![Rat::zero(); rows];
    for (r, &s) in states.iter().enumerate() {
        for (j, g) in gs.iter().enumerate() {
            a[r][j] = g.weight(s);
        }
        b[r] = d.weight(s);
    }
    for j in 0..cols {
        a[rows - 1][j] = Rat::one();
    }
    b[rows - 1] = Rat::one();

    simplex_feasible(&a, &b)
}

/// Phase-1 simplex with Bland's rule on `A c = b`, `c >= 0`, `b >= 0`:
/// returns whether the system is feasible. Bland's rule (smallest-index
/// entering and leaving variable) guarantees termination.
fn simplex_feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    debug_assert!(b.iter().all(|v| !v.is_negative()));

    // Tableau columns: real variables, one artificial per row, RHS.
    let width = cols + rows + 1;
    let mut t = vec![vec![Rat::zero(); width]; rows];
    for r in 0..rows {
        t[r][..cols].clone_from_slice(&a[r]);
        t[r][cols + r] = Rat::one();
        t[r][width - 1] = b[r].clone();
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Objective: minimize the sum of artificials. Reduced cost of column j
    // under the artificial basis is c_j - sum_r t[r][j], with c_j = 1 on
    // artificial columns and 0 elsewhere; the RHS entry tracks -objective.
    let mut cost = vec![Rat::zero(); width];
    for (j, cj) in cost.iter_mut().enumerate() {
        let mut s = Rat::zero();
        for row in t.iter() {
            s += &row[j];
        }
        let direct = if (cols..cols + rows).contains(&j) {
            Rat::one()
        } else {
            Rat::zero()
        };
        *cj = direct - s;
    }

    loop {
        // Entering: smallest-index column with negative reduced cost.
        let Some(enter) = (0..cols + rows).find(|&j| cost[j].is_negative()) else {
            break;
        };
        // Leaving: min ratio, ties by smallest basis variable index.
        let mut best: Option<(usize, Rat)> = None;
        for r in 0..rows {
            let pivot = &t[r][enter];
            if pivot.is_zero() || pivot.is_negative() {
                continue;
            }
            let ratio = &t[r][width - 1] / pivot;
            let better = match &best {
                None => true,
                Some((br, bratio)) => {
                    ratio < *bratio || (ratio == *bratio && basis[r] < basis[*br])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        let Some((leave, _)) = best else {
            // Unbounded cannot happen in phase 1; treat as infeasible.
            return false;
        };

        let pivot = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v = &*v / &pivot;
        }
        for r in 0..rows {
            if r == leave || t[r][enter].is_zero() {
                continue;
            }
            let factor = t[r][enter].clone();
            for j in 0..width {
                let delta = &factor * &t[leave][j];
                t[r][j] = &t[r][j] - &delta;
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for j in 0..width {
                let delta = &factor * &t[leave][j];
                cost[j] = &cost[j] - &delta;
            }
        }
        basis[leave] = enter;
    }

    // Feasible iff the artificials can all be driven to zero; the objective
    // value sits in the RHS entry of the cost row, negated.
    cost[width - 1].is_zero()
}

/// Removes redundant generators, scanning in list order: a generator is
/// dropped iff it lies in the hull of the survivors so far plus the
/// not-yet-scanned rest. The result is an irredundant subset spanning the
/// same hull, deterministic in the input order.
pub fn prune(g: &GeneratorSet) -> GeneratorSet {
    let gens = &g.generators;
    let mut keep = vec![true; gens.len()];
    for i in 0..gens.len() {
        let others: Vec<&Distribution> = (0..gens.len())
            .filter(|&j| j != i && (j > i || keep[j]))
            .map(|j| &gens[j])
            .collect();
        if !others.is_empty() && membership(&gens[i], &others) {
            keep[i] = false;
        }
    }
    GeneratorSet::new(
        gens.iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(g, _)| g.clone())
            .collect(),
    )
}

/// Do two generator sets span the same convex hull?
pub fn hulls_equal(g1: &GeneratorSet, g2: &GeneratorSet) -> bool {
    g1.generators
        .iter()
        .all(|d| is_redundant(d, &g2.generators))
        && g2
            .generators
            .iter()
            .all(|d| is_redundant(d, &g1.generators))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(StateId, (i64, i64))]) -> Distribution {
        Distribution::from_pairs(pairs.iter().map(|&(s, (n, d))| (s, Rat::new(n, d)))).unwrap()
    }

    fn comb(fracs: &[(i64, i64)]) -> ConvexCombination {
        ConvexCombination::new(fracs.iter().map(|&(n, d)| Rat::new(n, d)).collect()).unwrap()
    }

    #[test]
    fn mix_projection() {
        let d = dist(&[(0, (1, 3)), (1, (2, 3))]);
        assert_eq!(mix(&comb(&[(1, 1)]), &[d.clone()]).unwrap(), d);
    }

    #[test]
    fn mix_of_points() {
        let got = mix(
            &comb(&[(1, 2), (1, 2)]),
            &[Distribution::point(1), Distribution::point(2)],
        )
        .unwrap();
        assert_eq!(got, dist(&[(1, (1, 2)), (2, (1, 2))]));
    }

    #[test]
    fn mix_worked_example() {
        // 1/2 * s1 + 1/2 * (1/2 s1 + 1/2 s2) = 3/4 s1 + 1/4 s2
        let got = mix(
            &comb(&[(1, 2), (1, 2)]),
            &[
                Distribution::point(1),
                dist(&[(1, (1, 2)), (2, (1, 2))]),
            ],
        )
        .unwrap();
        assert_eq!(got, dist(&[(1, (3, 4)), (2, (1, 4))]));
    }

    #[test]
    fn mix_length_mismatch() {
        let err = mix(&comb(&[(1, 1)]), &[]).unwrap_err();
        assert!(matches!(err, ConvexError::LengthMismatch { .. }));
    }

    #[test]
    fn bad_coefficients_rejected() {
        assert!(matches!(
            ConvexCombination::new(vec![Rat::new(-1, 2), Rat::new(3, 2)]),
            Err(ConvexError::NegativeCoefficient(_))
        ));
        assert!(matches!(
            ConvexCombination::new(vec![Rat::new(1, 2)]),
            Err(ConvexError::CoefficientSum(_))
        ));
    }

    #[test]
    fn member_of_own_list() {
        let g1 = dist(&[(0, (1, 2)), (1, (1, 2))]);
        let g2 = Distribution::point(0);
        assert!(is_redundant(&g1, &[g2.clone(), g1.clone()]));
    }

    #[test]
    fn midpoint_is_redundant() {
        let g1 = Distribution::point(0);
        let g2 = Distribution::point(1);
        let mid = mix(&comb(&[(1, 2), (1, 2)]), &[g1.clone(), g2.clone()]).unwrap();
        assert!(is_redundant(&mid, &[g1, g2]));
    }

    #[test]
    fn point_outside_single_generator_hull() {
        // Hull of one generator is that point alone.
        let d = Distribution::point(1);
        let g = dist(&[(1, (1, 2)), (2, (1, 2))]);
        assert!(!is_redundant(&d, &[g]));
    }

    #[test]
    fn prune_keeps_single_generator() {
        let g = GeneratorSet::singleton(dist(&[(0, (1, 4)), (1, (3, 4))]));
        assert_eq!(prune(&g), g);
    }

    #[test]
    fn prune_drops_interior_point() {
        let g1 = Distribution::point(0);
        let g2 = dist(&[(0, (1, 2)), (1, (1, 2))]);
        let mid = mix(&comb(&[(1, 2), (1, 2)]), &[g1.clone(), g2.clone()]).unwrap();
        let set = GeneratorSet::new(vec![g1.clone(), g2.clone(), mid]);
        assert_eq!(prune(&set), GeneratorSet::new(vec![g1, g2]));
    }

    #[test]
    fn prune_retains_worked_example_generators() {
        let set = GeneratorSet::new(vec![
            Distribution::point(0),
            dist(&[(1, (1, 2)), (2, (1, 2))]),
            dist(&[(1, (3, 4)), (2, (1, 4))]),
        ]);
        assert_eq!(prune(&set), set);
    }

    #[test]
    fn prune_dedups_repeats() {
        let d = dist(&[(0, (1, 2)), (1, (1, 2))]);
        let set = GeneratorSet::new(vec![d.clone(), d.clone(), d.clone()]);
        assert_eq!(prune(&set), GeneratorSet::singleton(d));
    }

    #[test]
    fn hulls_equal_ignores_order() {
        let g1 = GeneratorSet::new(vec![Distribution::point(1), Distribution::point(2)]);
        let g2 = GeneratorSet::new(vec![Distribution::point(2), Distribution::point(1)]);
        assert!(hulls_equal(&g1, &g2));
    }

    #[test]
    fn distinct_points_have_distinct_hulls() {
        let g1 = GeneratorSet::singleton(Distribution::point(1));
        let g2 = GeneratorSet::singleton(Distribution::point(2));
        assert!(!hulls_equal(&g1, &g2));
    }

    #[test]
    fn interval_decomposition() {
        // Distributions over two states model the unit interval by their
        // weight on state 1; the interval [p, q] then decomposes as
        // p*{1} + (q - p)*[0, 1] + (1 - q)*{0}, lifted to generator picks.
        let value = |n: i64, d: i64| -> Distribution {
            Distribution::from_pairs([(0, Rat::one() - Rat::new(n, d)), (1, Rat::new(n, d))])
                .unwrap()
        };
        let (p, q) = ((1, 4), (2, 3));
        let endpoints = [value(0, 1), value(1, 1)];
        let coeffs = comb(&[(1, 4), (5, 12), (1, 3)]); // p, q - p, 1 - q
        let mut lifted = Vec::new();
        for pick in &endpoints {
            lifted.push(
                mix(
                    &coeffs,
                    &[value(1, 1), pick.clone(), value(0, 1)],
                )
                .unwrap(),
            );
        }
        let interval = GeneratorSet::new(vec![value(p.0, p.1), value(q.0, q.1)]);
        assert!(hulls_equal(&GeneratorSet::new(lifted), &interval));
    }
}
