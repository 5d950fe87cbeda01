//! The parallel selection rule: evaluate the whole family at the current
//! point and pick an index of maximal displacement.
//!
//! Evaluations run concurrently (the operators are pure), but the argmax
//! reduction is a sequential scan over the collected displacements, so the
//! outcome is identical no matter how many threads evaluate the family.
//! Among equally-displaced candidates the smallest index wins.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::Operator;

/// Outcome of one selection: the chosen index (0-based position in the
/// family), its displacement, the full displacement profile, and the cached
/// image of the chosen operator. Command-line traces print indices 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    index: usize,
    displacement: f64,
    all_displacements: Vec<f64>,
    image: Vector,
}

impl Selection {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn displacement(&self) -> f64 {
        self.displacement
    }

    /// Displacement of every family member at the queried point, in family
    /// order. The maximum equals [`fixed_point_residual`] there.
    ///
    /// [`fixed_point_residual`]: crate::operators::fixed_point_residual
    pub fn all_displacements(&self) -> &[f64] {
        &self.all_displacements
    }

    /// `T_{index} x`, computed once during selection.
    pub fn image(&self) -> &Vector {
        &self.image
    }
}

/// Selects an index of maximal displacement with exact comparison.
pub fn select(ops: &[Operator], x: &Vector) -> Result<Selection> {
    select_with_tolerance(ops, x, 0.0)
}

/// Selects the smallest index whose displacement is within `tie_tol` of the
/// maximum. `tie_tol = 0` reproduces the exact argmax; any nonzero value
/// still returns a member of the argmax up to that tolerance.
pub fn select_with_tolerance(ops: &[Operator], x: &Vector, tie_tol: f64) -> Result<Selection> {
    if ops.is_empty() {
        return Err(Error::EmptyOperatorList);
    }
    for op in ops {
        if op.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: op.dim(),
                got: x.dim(),
            });
        }
    }

    let images: Vec<Vector> = ops
        .par_iter()
        .map(|op| op.apply(x))
        .collect::<Result<_>>()?;
    let all_displacements: Vec<f64> = images
        .iter()
        .map(|image| image.distance(x))
        .collect::<Result<_>>()?;

    let max = all_displacements.iter().copied().fold(0.0f64, f64::max);
    let index = all_displacements
        .iter()
        .position(|&d| d >= max - tie_tol)
        .expect("a nonempty family always has an argmax");

    Ok(Selection {
        index,
        displacement: all_displacements[index],
        image: images.into_iter().nth(index).expect("index in range"),
        all_displacements,
    })
}
