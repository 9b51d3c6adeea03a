//! Exact dense linear algebra over the rationals: row reduction, rank,
//! square solves, and nullspace bases. Sizes here are tiny (ambient
//! dimensions of test instances), so dense Gaussian elimination is enough.

use crate::rat::{Rat, RatVector};

/// Row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: Vec<RatVector>,
    cols: usize,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<RatVector>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.dim(), cols, "ragged matrix");
        }
        RatMatrix { rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[RatVector] {
        &self.rows
    }

    /// In-place reduced row echelon form; returns pivot column per pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows.len() {
                break;
            }
            let Some(p) = (row..self.rows.len()).find(|&r| !self.rows[r].coord(col).is_zero())
            else {
                continue;
            };
            self.rows.swap(row, p);
            let inv = self.rows[row].coord(col).recip();
            self.rows[row] = self.rows[row].scale(&inv);
            for r in 0..self.rows.len() {
                if r != row && !self.rows[r].coord(col).is_zero() {
                    let factor = self.rows[r].coord(col).clone();
                    self.rows[r] = self.rows[r].sub(&self.rows[row].scale(&factor));
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

pub fn rank(rows: &[RatVector], cols: usize) -> usize {
    let mut m = RatMatrix::from_rows(rows.to_vec(), cols);
    m.rref().len()
}

/// Solve the square system with rows `a` and right-hand side `b`.
/// Returns `None` when the matrix is singular.
pub fn solve_square(a: &[RatVector], b: &[Rat]) -> Option<RatVector> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let augmented: Vec<RatVector> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.dim(), n, "solve_square requires a square matrix");
            let mut coords = row.coords().to_vec();
            coords.push(rhs.clone());
            RatVector::new(coords)
        })
        .collect();
    let mut m = RatMatrix::from_rows(augmented, n + 1);
    let pivots = m.rref();
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(RatVector::new(
        (0..n).map(|i| m.rows[i].coord(n).clone()).collect(),
    ))
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[RatVector], cols: usize) -> Vec<RatVector> {
    let mut m = RatMatrix::from_rows(rows.to_vec(), cols);
    let pivots = m.rref();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = RatVector::zeros(cols);
        v.set_coord(free, Rat::one());
        for (pivot_row, &pivot_col) in pivots.iter().enumerate() {
            v.set_coord(pivot_col, -m.rows[pivot_row].coord(free));
        }
        basis.push(v);
    }
    basis
}
