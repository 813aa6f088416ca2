//! Smith normal form over the integers.
//!
//! Pivoting always picks the entry of smallest nonzero absolute value in the
//! active submatrix, ties broken by row then column, so outputs are fully
//! deterministic for a fixed input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u · a · v = s` with `u`, `v` unimodular and `s` diagonal.
///
/// The inverses of both transforms are tracked alongside, since most callers
/// need to move between original and Smith coordinates in both directions.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rank: usize,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);
    let mut rank = 0;

    'outer: for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&s, k) else {
                break 'outer;
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            u_inv.swap_cols(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);
            v_inv.swap_rows(k, pj);

            let pivot = s[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..m {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = s[(i, k)].div_floor(&pivot);
                if !q.is_zero() {
                    let neg = -&q;
                    s.add_row_multiple(i, k, &neg);
                    u.add_row_multiple(i, k, &neg);
                    u_inv.add_col_multiple(k, i, &q);
                }
                if !s[(i, k)].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = s[(k, j)].div_floor(&pivot);
                if !q.is_zero() {
                    let neg = -&q;
                    s.add_col_multiple(j, k, &neg);
                    v.add_col_multiple(j, k, &neg);
                    v_inv.add_row_multiple(k, j, &q);
                }
                if !s[(k, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the rest.
            let offending = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot))
            });
            if let Some(i) = offending {
                let one = BigInt::one();
                s.add_row_multiple(k, i, &one);
                u.add_row_multiple(k, i, &one);
                u_inv.add_col_multiple(i, k, &-one);
                continue;
            }
            break;
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
            u_inv.negate_col(k);
        }
        rank = k + 1;
    }

    SmithDecomposition {
        u,
        s,
        v,
        u_inv,
        v_inv,
        rank,
    }
}

fn min_abs_entry(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                let done = a.is_one();
                best = Some(((i, j), a));
                if done {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}
