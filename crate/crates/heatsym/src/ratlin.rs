//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Small dense routines used by the constraint filter and the algebra-closure
//! checks: reduced row echelon form, consistent-system solve, and null-space
//! bases. Everything is exact; there is no pivoting heuristic beyond taking
//! the first nonzero entry.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Row = Vec<BigRational>;

/// Reduce `rows` in place to reduced row echelon form.
///
/// Returns the pivot column of each nonzero row, in order. Zero rows are
/// removed.
pub fn rref(rows: &mut Vec<Row>) -> Vec<usize> {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(ncols, BigRational::zero());
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pr);
        let inv = rows[row][col].recip();
        for v in rows[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[row].clone();
                for (dst, src) in rows[r].iter_mut().zip(&pivot_row) {
                    let delta = &f * src;
                    *dst = &*dst - &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rows.truncate(row);
    pivots
}

/// Solve `A x = b` exactly. `None` when the system is inconsistent; for
/// underdetermined systems the free variables are set to zero.
pub fn solve(a: &[Row], b: &[BigRational], ncols: usize) -> Option<Vec<BigRational>> {
    let mut aug: Vec<Row> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.resize(ncols, BigRational::zero());
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &col) in aug.iter().zip(&pivots) {
        if col == ncols {
            return None; // pivot in the augmented column
        }
        x[col] = row[ncols].clone();
    }
    Some(x)
}

/// Null-space basis of the row space spanned by `rows` (as constraints on an
/// `ncols`-dimensional vector). One basis vector per free column, with a `1`
/// in the free position; vectors are ordered by free column.
pub fn null_space(rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut reduced: Vec<Row> = rows
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.resize(ncols, BigRational::zero());
            row
        })
        .collect();
    let pivots = rref(&mut reduced);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn row(vals: &[i64]) -> Row {
        vals.iter().map(|&v| q(v)).collect()
    }

    #[test]
    fn rref_dedupes_and_orders() {
        let mut rows = vec![row(&[0, 2, 0]), row(&[0, 1, 0]), row(&[3, 0, 0])];
        let pivots = rref(&mut rows);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows, vec![row(&[1, 0, 0]), row(&[0, 1, 0])]);
    }

    #[test]
    fn solve_consistent() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let a = vec![row(&[1, 1]), row(&[1, -1])];
        let x = solve(&a, &[q(3), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![row(&[1, 1]), row(&[2, 2])];
        assert!(solve(&a, &[q(1), q(3)], 2).is_none());
    }

    #[test]
    fn null_space_basis() {
        // k1 = 0 and k3 - k6 = 0 over 6 coordinates.
        let rows = vec![row(&[1, 0, 0, 0, 0, 0]), row(&[0, 0, 1, 0, 0, -1])];
        let basis = null_space(&rows, 6);
        assert_eq!(basis.len(), 4);
        // Every basis vector satisfies both constraints.
        for v in &basis {
            assert!(v[0].is_zero());
            assert_eq!(v[2], v[5]);
        }
        // No constraints: full space.
        assert_eq!(null_space(&[], 6).len(), 6);
    }
}
