//! Exact phase-1 simplex for feasibility of `A t = b, t >= 0` with `b >= 0`.
//!
//! One artificial variable per row; the sum of artificials is minimized with
//! Bland's rule, which cannot cycle, so the loop always terminates.

use num::rational::BigRational;
use num::{Signed, Zero};

/// Returns a nonnegative solution of `A t = b` if one exists.
///
/// Every entry of `b` must be nonnegative and every row of `a` must have the
/// same length.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, |r| r.len());
    debug_assert!(b.iter().all(|v| !v.is_negative()));
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }

    // Columns 0..n are structural, n..n+m artificial; the last holds the rhs.
    let width = n + m + 1;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let mut r = Vec::with_capacity(width);
        r.extend(row.iter().cloned());
        r.extend((0..m).map(|j| {
            if i == j {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            }
        }));
        r.push(b[i].clone());
        tab.push(r);
    }
    // Reduced costs of the phase-1 objective `Σ artificials`.
    let mut cost = vec![BigRational::zero(); width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    tab.push(cost);
    let mut basic: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| tab[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][width - 1] / &tab[i][enter];
            let better = match (&best, leave) {
                (None, _) => true,
                (Some(b), Some(l)) => ratio < *b || (ratio == *b && basic[i] < basic[l]),
                (Some(_), None) => unreachable!(),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        // The phase-1 objective is bounded below by zero.
        let leave = leave.expect("phase-1 objective cannot be unbounded");
        pivot(&mut tab, leave, enter);
        basic[leave] = enter;
    }

    if !tab[m][width - 1].is_zero() {
        return None;
    }
    let mut t = vec![BigRational::zero(); n];
    for (i, &var) in basic.iter().enumerate() {
        if var < n {
            t[var] = tab[i][width - 1].clone();
        }
    }
    Some(t)
}

fn pivot(tab: &mut [Vec<BigRational>], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
}
