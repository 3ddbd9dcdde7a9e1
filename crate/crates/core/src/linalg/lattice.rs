//! Integer solutions of integer linear systems via column Hermite reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Finds an integer `x` with `a x = rhs`, or `None` when no integer solution
/// exists. `a` is given row-major with `cols` columns.
pub fn solve_integral(a: &[Vec<BigInt>], cols: usize, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    assert_eq!(rhs.len(), rows);
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    // Accumulated unimodular column transform.
    let mut u: Vec<Vec<BigInt>> =
        (0..cols).map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut next = 0;

    for i in 0..rows {
        if next == cols {
            break;
        }
        for j in next + 1..cols {
            if m[i][j].is_zero() {
                continue;
            }
            let (p, q) = (m[i][next].clone(), m[i][j].clone());
            let eg = p.extended_gcd(&q);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (pg, qg) = (&p / &g, &q / &g);
            // [col_next, col_j] <- [s*c_next + t*c_j, -qg*c_next + pg*c_j]; determinant 1.
            combine_columns(&mut m, next, j, &s, &t, &qg, &pg);
            combine_columns(&mut u, next, j, &s, &t, &qg, &pg);
        }
        if !m[i][next].is_zero() {
            pivot_of_row[i] = Some(next);
            next += 1;
        }
    }

    let mut z = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let mut residual = rhs[i].clone();
        for (k, zk) in z.iter().enumerate() {
            if Some(k) != pivot_of_row[i] {
                residual -= &m[i][k] * zk;
            }
        }
        match pivot_of_row[i] {
            Some(c) => {
                let (quot, rem) = residual.div_rem(&m[i][c]);
                if !rem.is_zero() {
                    return None;
                }
                z[c] = quot;
            }
            None if !residual.is_zero() => return None,
            None => {}
        }
    }
    Some((0..cols).map(|r| (0..cols).map(|k| &u[r][k] * &z[k]).sum()).collect())
}

fn combine_columns(m: &mut [Vec<BigInt>], a: usize, b: usize, s: &BigInt, t: &BigInt, neg_q: &BigInt, p: &BigInt) {
    for row in m.iter_mut() {
        let (ca, cb) = (row[a].clone(), row[b].clone());
        row[a] = s * &ca + t * &cb;
        row[b] = p * &cb - neg_q * &ca;
    }
}
