//! Gauss elimination with partial pivoting for the 2x2 and 3x3 normal
//! equations.

use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the largest row norm are treated as zero.
pub const SINGULAR_RTOL: f64 = 1e-12;

/// A square dense system `matrix * x = rhs` of fixed size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallSystem<const N: usize> {
    pub matrix: [[f64; N]; N],
    pub rhs: [f64; N],
}

impl<const N: usize> SmallSystem<N> {
    pub fn new(matrix: [[f64; N]; N], rhs: [f64; N]) -> Self {
        Self { matrix, rhs }
    }

    /// Solves by forward elimination with row pivoting and back substitution.
    ///
    /// Returns [`Error::SingularSystem`] when any pivot magnitude drops below
    /// [`SINGULAR_RTOL`] times the largest row infinity-norm of the input, or
    /// when the input contains non-finite values.
    pub fn solve(&self) -> Result<[f64; N]> {
        let scale = self
            .matrix
            .iter()
            .map(|row| row.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .fold(0.0f64, f64::max);
        if !scale.is_finite() || scale == 0.0 || self.rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        let tol = SINGULAR_RTOL * scale;

        let mut m = self.matrix;
        let mut b = self.rhs;
        for col in 0..N {
            let pivot_row = (col..N)
                .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
                .expect("non-empty pivot range");
            if m[pivot_row][col].abs() < tol {
                return Err(Error::SingularSystem);
            }
            m.swap(col, pivot_row);
            b.swap(col, pivot_row);

            for row in col + 1..N {
                let factor = m[row][col] / m[col][col];
                if factor == 0.0 {
                    continue;
                }
                let pivot = m[col];
                for (entry, p) in m[row][col..].iter_mut().zip(&pivot[col..]) {
                    *entry -= factor * p;
                }
                b[row] -= factor * b[col];
            }
        }

        let mut x = [0.0; N];
        for row in (0..N).rev() {
            let tail: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
            x[row] = (b[row] - tail) / m[row][row];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        Ok(x)
    }

    /// Infinity norm of `matrix * x - rhs`.
    pub fn residual_norm(&self, x: &[f64; N]) -> f64 {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}
