//! Independent reference machinery: nearest-point projection onto an
//! intersection of projectable sets via Dykstra's algorithm, membership
//! tests, and reduction of operator families to their underlying sets.
//!
//! This module supplies the ground truth the iteration schemes are tested
//! against. Dykstra's corrections are what distinguish it from plain cyclic
//! projections, which converge to *some* point of the intersection but not
//! the nearest one; the anchored schemes target specifically `P_F(u)`, so
//! the reference has to get the nearest point right.

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::{ConvexSet, Operator, OperatorKind};

/// Dykstra stopping parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Successive-sweep movement below which the sweep loop stops.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tol: 1e-12,
            max_sweeps: 1_000_000,
        }
    }
}

impl OracleConfig {
    pub fn new(tol: f64, max_sweeps: usize) -> Result<Self> {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::construction(
                "oracle config",
                format!("tolerance must be a positive real, got {tol}"),
            ));
        }
        Ok(OracleConfig { tol, max_sweeps })
    }
}

/// Nearest point of `∩ sets` to `x` by Dykstra's cyclic correction scheme.
///
/// Nested `Intersection` members are flattened into the cycle. Fails with
/// [`Error::PossiblyEmptyIntersection`] when the sweeps stop contracting
/// within the budget, the usual signature of an empty intersection.
pub fn project_intersection(
    sets: &[ConvexSet],
    x: &Vector,
    cfg: &OracleConfig,
) -> Result<Vector> {
    if sets.is_empty() {
        return Err(Error::construction(
            "oracle query",
            "need at least one set to project onto",
        ));
    }
    let members: Vec<&ConvexSet> = sets
        .iter()
        .flat_map(|s| s.projectable_members())
        .collect();
    for m in &members {
        if m.dim() != x.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                got: m.dim(),
            });
        }
    }

    // Stationarity of the (iterate, corrections) pair certifies feasibility:
    // x = P_i(x + p_i) with unchanged p_i puts x in every set. Tracking the
    // iterate alone is not enough; on a disjoint pair the iterate converges
    // to a point of the last set while the corrections grow without bound,
    // absorbing the gap once per sweep.
    let mut current = x.clone();
    let mut corrections = vec![Vector::zeros(x.dim())?; members.len()];
    let mut last_change = f64::INFINITY;
    for _sweep in 0..cfg.max_sweeps {
        let sweep_start = current.clone();
        let mut correction_change = 0.0f64;
        for (set, correction) in members.iter().zip(corrections.iter_mut()) {
            let shifted = current.add(correction)?;
            let projected = set.project(&shifted)?;
            let updated = shifted.sub(&projected)?;
            correction_change = correction_change.max(updated.distance(correction)?);
            *correction = updated;
            current = projected;
        }
        last_change = current.distance(&sweep_start)?.max(correction_change);
        if last_change <= cfg.tol {
            return Ok(current);
        }
    }
    Err(Error::PossiblyEmptyIntersection {
        sweeps: cfg.max_sweeps,
        last_change,
        tol: cfg.tol,
    })
}

/// Whether `x` lies within `tol` of `∩ sets`.
pub fn membership(sets: &[ConvexSet], x: &Vector, tol: f64) -> Result<bool> {
    let nearest = project_intersection(sets, x, &OracleConfig::default())?;
    Ok(nearest.distance(x)? <= tol)
}

/// Rewrites an operator's fixed point set as a list of projectable sets,
/// when its construction permits:
///
/// * a metric projection fixes exactly its set;
/// * a relaxation fixes exactly what the relaxed operator fixes;
/// * a composition `T ∘ P_C` fixes the fixed points of `T` inside `C`;
/// * a subgradient projection fixes the zero-sublevel set of its
///   functional, which is a halfspace intersection for max-affine
///   functionals and a ball for isotropic quadratics.
///
/// Affine operators and anisotropic quadratics have no representation in
/// the projectable geometry and yield an [`Error::OracleUnavailable`].
pub fn fixed_point_sets(op: &Operator) -> Result<Vec<ConvexSet>> {
    match op.kind() {
        OperatorKind::MetricProjection(set) => Ok(vec![set.clone()]),
        OperatorKind::Relaxed { inner, .. } => fixed_point_sets(inner),
        OperatorKind::ComposedWithProjection { inner, domain } => {
            let mut sets = fixed_point_sets(inner)?;
            sets.push(domain.clone());
            Ok(sets)
        }
        OperatorKind::SubgradientProjection(f) => sublevel_sets(f),
        OperatorKind::Affine { .. } => Err(Error::OracleUnavailable(
            "affine operators have no projectable fixed point set representation".into(),
        )),
    }
}

/// Fixed point sets of a whole family: the concatenation over members, so
/// that their intersection is the family's common fixed point set.
pub fn family_fixed_point_sets(ops: &[Operator]) -> Result<Vec<ConvexSet>> {
    if ops.is_empty() {
        return Err(Error::EmptyOperatorList);
    }
    let mut sets = Vec::new();
    for op in ops {
        sets.extend(fixed_point_sets(op)?);
    }
    Ok(sets)
}

fn sublevel_sets(f: &crate::operators::ConvexFunctional) -> Result<Vec<ConvexSet>> {
    use crate::operators::ConvexFunctional;
    match f {
        ConvexFunctional::MaxAffine { pieces } => {
            let mut sets = Vec::new();
            for (i, (a, b)) in pieces.iter().enumerate() {
                if a.norm() == 0.0 {
                    // a constant piece either rules out everything or nothing
                    if *b > 0.0 {
                        return Err(Error::construction(
                            "functional",
                            format!("piece {i} is the positive constant {b}; the level set is empty"),
                        ));
                    }
                    continue;
                }
                sets.push(ConvexSet::halfspace(a.clone(), -b)?);
            }
            if sets.is_empty() {
                return Err(Error::OracleUnavailable(
                    "level set is the whole space; nothing to project onto".into(),
                ));
            }
            Ok(sets)
        }
        ConvexFunctional::Quadratic {
            q_matrix,
            linear,
            constant,
        } => {
            // only isotropic Q = c I reduces to a ball:
            // <x, cx>/2 + <q, x> + r <= 0  <=>  ||x + q/c||^2 <= ||q/c||^2 - 2r/c
            let rows = q_matrix.rows();
            let c = rows[0][0];
            let isotropic = c > 0.0
                && rows.iter().enumerate().all(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .all(|(j, &entry)| entry == if i == j { c } else { 0.0 })
                });
            if !isotropic {
                return Err(Error::OracleUnavailable(
                    "only isotropic quadratics (Q = c I, c > 0) reduce to a ball".into(),
                ));
            }
            let center = linear.scale(-1.0 / c)?;
            let radius_sq = center.inner(&center)? - 2.0 * constant / c;
            if radius_sq < 0.0 {
                return Err(Error::construction(
                    "functional",
                    format!("quadratic sublevel set is empty (squared radius {radius_sq})"),
                ));
            }
            Ok(vec![ConvexSet::ball(center, radius_sq.sqrt())?])
        }
    }
}
