//! Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form: rows span the same lattice as the rows of `a`,
/// leading entries are positive and move strictly right, entries above a
/// leading entry lie in `[0, pivot)`. Zero rows are dropped.
pub fn row_hnf(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            // smallest |entry| at or below pivot_row in this column
            let mut best: Option<(usize, BigInt)> = None;
            for r in pivot_row..rows {
                let x = &m[(r, col)];
                if !x.is_zero() {
                    let ax = x.abs();
                    if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                        best = Some((r, ax));
                    }
                }
            }
            let Some((r, _)) = best else { break };
            m.swap_rows(pivot_row, r);
            let pivot = m[(pivot_row, col)].clone();
            let mut done = true;
            for r in pivot_row + 1..rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let q = m[(r, col)].div_floor(&pivot);
                m.add_row_multiple(r, pivot_row, &-q);
                if !m[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[(pivot_row, col)].is_zero() {
            continue;
        }
        if m[(pivot_row, col)].is_negative() {
            m.negate_row(pivot_row);
        }
        let pivot = m[(pivot_row, col)].clone();
        for r in 0..pivot_row {
            let q = m[(r, col)].div_floor(&pivot);
            if !q.is_zero() {
                m.add_row_multiple(r, pivot_row, &-q);
            }
        }
        pivot_row += 1;
    }
    m.submatrix(0..pivot_row, 0..cols)
}

/// Column Hermite normal form: the transpose of [`row_hnf`] of the transpose.
/// The columns form a canonical basis of the lattice spanned by the columns
/// of `a`; the first nonzero entry of each column is positive.
pub fn column_hnf(a: &IntMatrix) -> IntMatrix {
    let rows = a.rows();
    let h = row_hnf(&a.transpose()).transpose();
    if h.cols() == 0 {
        IntMatrix::zeros(rows, 0)
    } else {
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_form_of_single_vector_has_positive_lead() {
        let a = IntMatrix::from_rows(&[[-1], [1]]);
        let h = column_hnf(&a);
        assert_eq!(h, IntMatrix::from_rows(&[[1], [-1]]));
    }

    #[test]
    fn drops_dependent_generators() {
        let a = IntMatrix::from_rows(&[[2, 4, 6], [0, 0, 0]]);
        let h = column_hnf(&a);
        assert_eq!(h, IntMatrix::from_rows(&[[2], [0]]));
    }

    #[test]
    fn reduced_above_pivots() {
        let a = IntMatrix::from_rows(&[[1, 7], [0, 3]]);
        let h = row_hnf(&a);
        assert_eq!(h, IntMatrix::from_rows(&[[1, 1], [0, 3]]));
    }

    #[test]
    fn empty() {
        let h = column_hnf(&IntMatrix::zeros(3, 0));
        assert_eq!((h.rows(), h.cols()), (3, 0));
    }
}
