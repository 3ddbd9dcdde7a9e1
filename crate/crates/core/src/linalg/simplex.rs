//! Exact simplex for `max c.y` subject to `A y <= b`, `y >= 0`, `b >= 0`.
//!
//! The origin is feasible because `b >= 0`, so a single phase suffices.
//! Bland's rule rules out cycling.

use num_traits::{Signed, Zero};

use super::{RatMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Rational),
    Unbounded,
}

pub fn maximize(a: &RatMatrix, b: &[Rational], c: &[Rational]) -> LpOutcome {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    assert!(b.iter().all(|v| !v.is_negative()), "origin must be feasible");

    // Tableau columns: n structural, m slack, then the right-hand side.
    let width = n + m + 1;
    let mut tab = vec![vec![Rational::zero(); width]; m];
    for (i, row) in tab.iter_mut().enumerate() {
        for j in 0..n {
            row[j] = a.get(i, j).clone();
        }
        row[n + i] = Rational::from_integer(1.into());
        row[width - 1] = b[i].clone();
    }
    // Reduced costs stored as -c so that negative entries can improve.
    let mut cost = vec![Rational::zero(); width];
    for j in 0..n {
        cost[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            return LpOutcome::Optimal(cost[width - 1].clone());
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][width - 1] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = tab[pivot_row][enter].recip();
        for v in tab[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = tab[pivot_row].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == pivot_row || row[enter].is_zero() {
                continue;
            }
            let factor = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot) {
                *v -= &factor * p;
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&pivot) {
                *v -= &factor * p;
            }
        }
        basis[pivot_row] = enter;
    }
}
