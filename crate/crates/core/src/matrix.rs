//! Dense square matrices over a [`Scalar`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row count at which products are split across threads. Each output row
/// is computed independently, so results do not depend on the thread count.
const PARALLEL_ROWS: usize = 48;

/// Default exact-power size guard: 1 MiB per matrix.
pub const DEFAULT_SIZE_GUARD: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![S::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::WrongLength { expected: n, got: r.len() });
        }
        Ok(Matrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.n, other.n, "matrix orders differ");
        let n = self.n;
        let row = |i: usize| -> Vec<S> {
            let mut out = vec![S::zero(); n];
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (j, o) in out.iter_mut().enumerate() {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *o = o.clone() + a.clone() * b.clone();
                    }
                }
            }
            out
        };
        let rows: Vec<Vec<S>> = if n >= PARALLEL_ROWS {
            (0..n).into_par_iter().map(row).collect()
        } else {
            (0..n).map(row).collect()
        };
        Matrix { n, data: rows.into_iter().flatten().collect() }
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.n, "vector length differs from matrix order");
        let mut out = vec![S::zero(); self.n];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.clone() + vi.clone() * a.clone();
                }
            }
        }
        out
    }

    /// Exponentiation by squaring; `pow(0)` is the identity.
    pub fn pow(&self, m: u64) -> Matrix<S> {
        self.pow_guarded(m, usize::MAX).expect("unguarded power cannot fail")
    }

    /// As [`Matrix::pow`], aborting when any intermediate matrix exceeds
    /// `limit` bytes.
    pub fn pow_guarded(&self, mut m: u64, limit: usize) -> Result<Matrix<S>> {
        let mut result = Matrix::identity(self.n);
        let mut base = self.clone();
        loop {
            if m & 1 == 1 {
                result = result.mul(&base);
                result.check_footprint(limit)?;
            }
            m >>= 1;
            if m == 0 {
                return Ok(result);
            }
            base = base.mul(&base);
            base.check_footprint(limit)?;
        }
    }

    pub fn footprint(&self) -> usize {
        self.data.iter().map(Scalar::footprint).sum()
    }

    fn check_footprint(&self, limit: usize) -> Result<()> {
        if !S::EXACT {
            return Ok(());
        }
        let bytes = self.footprint();
        if bytes > limit {
            Err(Error::SizeGuard { bytes, limit })
        } else {
            Ok(())
        }
    }

    pub fn row_sums(&self) -> Vec<S> {
        (0..self.n).map(|i| crate::scalar::sum(self.row(i))).collect()
    }

    pub fn column_sums(&self) -> Vec<S> {
        (0..self.n)
            .map(|j| (0..self.n).fold(S::zero(), |acc, i| acc + self.get(i, j).clone()))
            .collect()
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        self.data.iter().all(|x| *x >= S::zero())
            && self.row_sums().iter().chain(self.column_sums().iter()).all(S::is_unit_mass)
    }

    /// Largest entrywise absolute difference, in f64.
    pub fn max_abs_diff(&self, other: &Matrix<S>) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        debug_assert_eq!(rows.len(), cols.len());
        Matrix::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix { n: self.n, data: self.data.iter().map(Scalar::to_f64).collect() }
    }
}
