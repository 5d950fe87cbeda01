//! Convex functionals backing subgradient projections.

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::matrix::Matrix;

/// A finite-valued convex functional with one computable subgradient per
/// point. The zero-sublevel set `{x : f(x) <= 0}` is the fixed point set of
/// the associated subgradient projection.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexFunctional {
    /// `f(x) = <x, Qx>/2 + <q, x> + r` with `Q` symmetric PSD.
    Quadratic {
        q_matrix: Matrix,
        linear: Vector,
        constant: f64,
    },
    /// `f(x) = max_i (<a_i, x> + b_i)`; subgradient ties break to the
    /// lowest piece index.
    MaxAffine { pieces: Vec<(Vector, f64)> },
}

impl ConvexFunctional {
    pub fn quadratic(q_matrix: Matrix, linear: Vector, constant: f64) -> Result<Self> {
        if q_matrix.dim() != linear.dim() {
            return Err(Error::DimensionMismatch {
                expected: q_matrix.dim(),
                got: linear.dim(),
            });
        }
        if !q_matrix.is_symmetric(1e-12) {
            return Err(Error::construction(
                "functional",
                "quadratic matrix must be symmetric",
            ));
        }
        if !q_matrix.is_positive_semidefinite(1e-10) {
            return Err(Error::construction(
                "functional",
                "quadratic matrix must be positive semidefinite",
            ));
        }
        if !constant.is_finite() {
            return Err(Error::construction("functional", "constant must be finite"));
        }
        Ok(ConvexFunctional::Quadratic {
            q_matrix,
            linear,
            constant,
        })
    }

    pub fn max_affine(pieces: Vec<(Vector, f64)>) -> Result<Self> {
        let Some((first, _)) = pieces.first() else {
            return Err(Error::construction(
                "functional",
                "max_affine needs at least one piece",
            ));
        };
        let dim = first.dim();
        for (i, (a, b)) in pieces.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::construction(
                    "functional",
                    format!("piece {i} has dimension {}, expected {dim}", a.dim()),
                ));
            }
            if !b.is_finite() {
                return Err(Error::construction(
                    "functional",
                    format!("piece {i} offset must be finite"),
                ));
            }
        }
        Ok(ConvexFunctional::MaxAffine { pieces })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexFunctional::Quadratic { linear, .. } => linear.dim(),
            ConvexFunctional::MaxAffine { pieces } => pieces[0].0.dim(),
        }
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        match self {
            ConvexFunctional::Quadratic {
                q_matrix,
                linear,
                constant,
            } => Ok(0.5 * x.inner(&q_matrix.matvec(x)?)? + linear.inner(x)? + constant),
            ConvexFunctional::MaxAffine { pieces } => {
                let mut best = f64::NEG_INFINITY;
                for (a, b) in pieces {
                    best = best.max(a.inner(x)? + b);
                }
                Ok(best)
            }
        }
    }

    /// One subgradient of `f` at `x`; for `MaxAffine`, the gradient of the
    /// lowest-index active piece.
    pub fn subgradient(&self, x: &Vector) -> Result<Vector> {
        match self {
            ConvexFunctional::Quadratic {
                q_matrix, linear, ..
            } => q_matrix.matvec(x)?.add(linear),
            ConvexFunctional::MaxAffine { pieces } => {
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for (i, (a, b)) in pieces.iter().enumerate() {
                    let value = a.inner(x)? + b;
                    if value > best {
                        best = value;
                        arg = i;
                    }
                }
                Ok(pieces[arg].0.clone())
            }
        }
    }
}
