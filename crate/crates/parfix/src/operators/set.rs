//! Projectable closed convex sets.

use crate::error::{Error, Result};
use crate::hilbert::{axpby, Vector};

/// A closed convex subset of `R^n` with a closed-form nearest-point map,
/// except for `Intersection`, which is projectable only through the oracle.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSet {
    /// `{ x : <normal, x> <= offset }`
    Halfspace { normal: Vector, offset: f64 },
    /// `{ x : <normal, x> = offset }`
    Hyperplane { normal: Vector, offset: f64 },
    /// `{ x : ||x - center|| <= radius }`
    Ball { center: Vector, radius: f64 },
    /// `{ x : lo_i <= x_i <= hi_i }`
    Box { lo: Vector, hi: Vector },
    /// `∩ members`; carries no closed-form projection of its own.
    Intersection(Vec<ConvexSet>),
}

impl ConvexSet {
    pub fn halfspace(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 {
            return Err(Error::construction("set", "halfspace normal must be nonzero"));
        }
        if !offset.is_finite() {
            return Err(Error::construction("set", "halfspace offset must be finite"));
        }
        Ok(ConvexSet::Halfspace { normal, offset })
    }

    pub fn hyperplane(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm() == 0.0 {
            return Err(Error::construction("set", "hyperplane normal must be nonzero"));
        }
        if !offset.is_finite() {
            return Err(Error::construction("set", "hyperplane offset must be finite"));
        }
        Ok(ConvexSet::Hyperplane { normal, offset })
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::construction("set", "ball radius must be finite and >= 0"));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn boxed(lo: Vector, hi: Vector) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                got: hi.dim(),
            });
        }
        for (i, (l, h)) in lo.coords().iter().zip(hi.coords().iter()).enumerate() {
            if l > h {
                return Err(Error::construction(
                    "set",
                    format!("box bounds inverted at coordinate {i}: lo {l} > hi {h}"),
                ));
            }
        }
        Ok(ConvexSet::Box { lo, hi })
    }

    pub fn intersection(members: Vec<ConvexSet>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::construction("set", "intersection must have members"));
        };
        let dim = first.dim();
        for (i, m) in members.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::construction(
                    "set",
                    format!("intersection member {i} has dimension {}, expected {dim}", m.dim()),
                ));
            }
        }
        Ok(ConvexSet::Intersection(members))
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Halfspace { normal, .. } | ConvexSet::Hyperplane { normal, .. } => {
                normal.dim()
            }
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::Box { lo, .. } => lo.dim(),
            ConvexSet::Intersection(members) => members[0].dim(),
        }
    }

    /// Nearest point of the set to `x`; returns `x` itself when feasible.
    ///
    /// `Intersection` has no closed form and fails with
    /// [`Error::NotDirectlyProjectable`]; callers needing it should use
    /// `oracle::project_intersection`.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        match self {
            ConvexSet::Halfspace { normal, offset } => {
                let violation = normal.inner(x)? - offset;
                if violation <= 0.0 {
                    Ok(x.clone())
                } else {
                    let nn = normal.inner(normal)?;
                    axpby(1.0, x, -violation / nn, normal)
                }
            }
            ConvexSet::Hyperplane { normal, offset } => {
                let violation = normal.inner(x)? - offset;
                let nn = normal.inner(normal)?;
                axpby(1.0, x, -violation / nn, normal)
            }
            ConvexSet::Ball { center, radius } => {
                let d = x.sub(center)?;
                let dist = d.norm();
                if dist <= *radius {
                    Ok(x.clone())
                } else {
                    axpby(1.0, center, radius / dist, &d)
                }
            }
            ConvexSet::Box { lo, hi } => Vector::new(
                x.coords()
                    .iter()
                    .zip(lo.coords().iter().zip(hi.coords()))
                    .map(|(&c, (&l, &h))| c.clamp(l, h))
                    .collect(),
            ),
            ConvexSet::Intersection(_) => Err(Error::NotDirectlyProjectable),
        }
    }

    /// `||x - P(x)||`.
    pub fn distance_to(&self, x: &Vector) -> Result<f64> {
        self.project(x)?.distance(x)
    }

    /// Flattens nested `Intersection` variants into a list of directly
    /// projectable sets.
    pub fn projectable_members(&self) -> Vec<&ConvexSet> {
        match self {
            ConvexSet::Intersection(members) => members
                .iter()
                .flat_map(|m| m.projectable_members())
                .collect(),
            other => vec![other],
        }
    }
}
