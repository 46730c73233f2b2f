//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use convexalg::finsupp::Key;
use convexalg::semiring::Semiring;
use convexalg::{Bool, FinSupp, QPlus};
use num::{BigRational, Zero};

/// Solves `m · t = rhs` by Gauss-Jordan elimination. `None` when the system
/// is inconsistent or has more than one solution.
fn unique_solution(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for c in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, r);
        rhs.swap(pivot_row, r);
        let p = m[pivot_row][c].clone();
        for v in m[pivot_row].iter_mut() {
            *v = &*v / &p;
        }
        rhs[pivot_row] = &rhs[pivot_row] / &p;
        for r in 0..rows {
            if r != pivot_row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let delta = &f * &m[pivot_row][k];
                    m[r][k] = &m[r][k] - delta;
                }
                let delta = &f * &rhs[pivot_row];
                rhs[r] = &rhs[r] - delta;
            }
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(rhs[..cols].to_vec())
}

/// Carathéodory: `point` is in the hull exactly when some affinely
/// independent subset of the generators reaches it with nonnegative
/// weights, and those weights are the unique solution of a square-or-taller
/// linear system.
pub fn caratheodory_contains<K: Key>(point: &FinSupp<QPlus, K>, gens: &[FinSupp<QPlus, K>]) -> bool {
    let mut coords: BTreeSet<K> = point.support_set();
    for g in gens {
        coords.extend(g.support_set());
    }
    for mask in 1u32..(1 << gens.len()) {
        let chosen: Vec<&FinSupp<QPlus, K>> = (0..gens.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &gens[i])
            .collect();
        let mut m: Vec<Vec<BigRational>> = coords
            .iter()
            .map(|k| chosen.iter().map(|g| g.get(k).as_ratio().clone()).collect())
            .collect();
        let mut rhs: Vec<BigRational> = coords.iter().map(|k| point.get(k).as_ratio().clone()).collect();
        m.push(vec![BigRational::from_integer(1.into()); chosen.len()]);
        rhs.push(BigRational::from_integer(1.into()));
        if let Some(t) = unique_solution(m, rhs) {
            if t.iter().all(|v| *v >= BigRational::zero()) {
                return true;
            }
        }
    }
    false
}

/// Over Bool a convex combination is the join of a nonempty subfamily.
pub fn subset_join_contains<K: Key>(point: &FinSupp<Bool, K>, gens: &[FinSupp<Bool, K>]) -> bool {
    (1u64..(1 << gens.len())).any(|mask| {
        let joined = FinSupp::sum((0..gens.len()).filter(|i| mask >> i & 1 == 1).map(|i| &gens[i]));
        joined == *point
    })
}

/// Indicator functions of the nonempty subsets of `items`.
pub fn nonempty_subset_indicators<K: Key>(items: &[K]) -> BTreeSet<FinSupp<Bool, K>> {
    (1u64..(1 << items.len()))
        .map(|mask| {
            FinSupp::from_entries(
                (0..items.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (items[i].clone(), Bool(true))),
            )
        })
        .collect()
}

/// `Π_k Σ_j λ^k_j` and `Σ_w Π_k λ^k_{w(k)}` over all index tuples `w`.
pub fn distributivity_sides<S: Semiring>(family: &[Vec<S>]) -> (S, S) {
    let product_of_sums = family.iter().fold(S::one(), |acc, row| {
        acc.mul(&row.iter().fold(S::zero(), |s, v| s.add(v)))
    });
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for row in family {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..row.len()).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    let sum_of_products = tuples.iter().fold(S::zero(), |acc, w| {
        let p = w
            .iter()
            .zip(family)
            .fold(S::one(), |p, (&j, row)| p.mul(&row[j]));
        acc.add(&p)
    });
    (product_of_sums, sum_of_products)
}
