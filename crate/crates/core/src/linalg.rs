//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// Reduced row echelon form of a rectangular matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of {x : M x = 0}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free = (0..self.cols).filter(|c| !self.pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in self.pivots.iter().enumerate() {
                v[p] = -self.rows[row][f].clone();
            }
            v
        })
        .collect()
    }
}

/// Row-reduces `m` (rows × cols). Within a column the pivot is the nonzero
/// entry with the smallest numerator/denominator footprint, ties broken by
/// the lowest row index.
pub fn row_reduce(m: &[Vec<Rational>], cols: usize) -> Echelon {
    let mut rows: Vec<Vec<Rational>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == rows.len() {
            break;
        }
        let best = (top..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| (rows[r][col].footprint(), r));
        let Some(p) = best else { continue };
        rows.swap(top, p);
        let inv = Rational::one() / rows[top][col].clone();
        for x in rows[top].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &factor * p;
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(pivots.len());
    Echelon { rows, pivots, cols }
}

pub fn rank(m: &[Vec<Rational>], cols: usize) -> usize {
    row_reduce(m, cols).rank()
}
