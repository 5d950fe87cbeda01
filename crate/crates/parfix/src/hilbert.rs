//! Dense vectors and inner-product geometry for the ambient space `R^n`.
//!
//! `Vector` is the one numeric carrier of the crate. Construction rejects
//! NaN and infinite coordinates, so every `Vector` in circulation is finite;
//! arithmetic that would produce a non-finite coordinate fails with
//! [`Error::NonFinite`] instead of letting the value propagate.

use crate::error::{Error, Result};

/// A point of `R^n`, immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    coords: Box<[f64]>,
}

impl Vector {
    /// Builds a vector, rejecting empty input and non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::construction(
                "vector",
                "dimension must be a positive integer",
            ));
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector {
            coords: coords.into_boxed_slice(),
        })
    }

    /// The zero vector of `R^dim`.
    pub fn zeros(dim: usize) -> Result<Self> {
        Vector::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `Σ_i a_i b_i`.
    pub fn inner(&self, other: &Vector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `sqrt(<a, a>)`. Always finite and nonnegative for a valid vector,
    /// except on inputs large enough for the sum of squares to overflow.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `||a - b||`.
    pub fn distance(&self, other: &Vector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    /// `a - b`.
    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        axpby(1.0, self, -1.0, other)
    }

    /// `a + b`.
    pub fn add(&self, other: &Vector) -> Result<Vector> {
        axpby(1.0, self, 1.0, other)
    }

    /// `alpha * a`.
    pub fn scale(&self, alpha: f64) -> Result<Vector> {
        Vector::new(self.coords.iter().map(|c| alpha * c).collect())
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

/// Componentwise `alpha * a + beta * b`; the affine-combination primitive
/// every iteration update is built from.
pub fn axpby(alpha: f64, a: &Vector, beta: f64, b: &Vector) -> Result<Vector> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Vector::new(
        a.coords
            .iter()
            .zip(b.coords.iter())
            .map(|(x, y)| alpha * x + beta * y)
            .collect(),
    )
}
