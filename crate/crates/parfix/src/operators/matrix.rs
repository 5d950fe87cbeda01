//! Minimal dense matrix support for affine test operators and quadratic
//! functionals. Row-major, square use only.

use crate::error::{Error, Result};
use crate::hilbert::Vector;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Box<[f64]>,
}

impl Matrix {
    /// Builds a square matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::construction("matrix", "dimension must be positive"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::construction(
                    "matrix",
                    format!("row {i} has {} entries, expected {dim}", row.len()),
                ));
            }
            for &entry in row {
                if !entry.is_finite() {
                    return Err(Error::construction(
                        "matrix",
                        format!("non-finite entry in row {i}"),
                    ));
                }
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            dim,
            data: data.into_boxed_slice(),
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut rows = vec![vec![0.0; dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Matrix::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// `A x`.
    pub fn matvec(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let xs = x.coords();
        Vector::new(
            (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.entry(i, j) * xs[j]).sum())
                .collect(),
        )
    }

    /// `A^T x`.
    pub fn matvec_transposed(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let xs = x.coords();
        Vector::new(
            (0..self.dim)
                .map(|j| (0..self.dim).map(|i| self.entry(i, j) * xs[i]).sum())
                .collect(),
        )
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let a = self.entry(i, j);
                let b = self.entry(j, i);
                if (a - b).abs() > tol * (1.0 + a.abs().max(b.abs())) {
                    return false;
                }
            }
        }
        true
    }

    /// Cholesky-based positive semidefiniteness test for symmetric input.
    /// Pivots below `-tol` fail; small negative pivots are treated as zero.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut l = vec![0.0f64; n * n];
        let scale = (0..n).map(|i| self.entry(i, i).abs()).fold(1.0, f64::max);
        for j in 0..n {
            let mut d = self.entry(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d < -tol * scale {
                return false;
            }
            if d <= tol * scale {
                // semidefinite direction: the rest of the column must vanish
                for i in (j + 1)..n {
                    let mut s = self.entry(i, j);
                    for k in 0..j {
                        s -= l[i * n + k] * l[j * n + k];
                    }
                    if s.abs() > tol.sqrt() * scale.max(1.0) {
                        return false;
                    }
                    l[i * n + j] = 0.0;
                }
                l[j * n + j] = 0.0;
                continue;
            }
            let dj = d.sqrt();
            l[j * n + j] = dj;
            for i in (j + 1)..n {
                let mut s = self.entry(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / dj;
            }
        }
        true
    }

    /// Largest singular value, by power iteration on `A^T A`.
    ///
    /// Deterministic: starts from a fixed ramp vector and stops when the
    /// Rayleigh quotient stabilizes within `tol`.
    pub fn spectral_norm(&self, tol: f64) -> Result<f64> {
        let n = self.dim;
        let mut v = Vector::new((0..n).map(|i| 1.0 + i as f64 / n as f64).collect())?;
        let norm = v.norm();
        v = v.scale(1.0 / norm)?;
        let mut lambda_prev = 0.0f64;
        for _ in 0..100_000 {
            let w = self.matvec_transposed(&self.matvec(&v)?)?;
            let lambda = v.inner(&w)?;
            let wn = w.norm();
            if wn == 0.0 {
                return Ok(0.0);
            }
            v = w.scale(1.0 / wn)?;
            if (lambda - lambda_prev).abs() <= tol * lambda.abs().max(1.0) {
                return Ok(lambda.max(0.0).sqrt());
            }
            lambda_prev = lambda;
        }
        Ok(lambda_prev.max(0.0).sqrt())
    }
}
