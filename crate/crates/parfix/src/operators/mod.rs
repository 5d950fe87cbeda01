//! The operator algebra: metric and subgradient projections, relaxations,
//! affine maps, and nonself-to-self compositions.
//!
//! Every operator carries the strongest property class its construction
//! guarantees. The iteration drivers check these classes against their
//! hypotheses before running, so an ill-posed configuration fails before
//! iteration 1 instead of silently diverging.

mod functional;
mod matrix;
mod set;

pub use functional::ConvexFunctional;
pub use matrix::Matrix;
pub use set::ConvexSet;

use crate::error::{Error, Result};
use crate::hilbert::{axpby, Vector};

/// Tolerance under which a displacement counts as "x is a fixed point".
pub const EPS_FIX: f64 = 1e-12;

/// The strongest verified property class of an operator construction.
///
/// All classes imply quasinonexpansiveness once the family has a common
/// fixed point, which every convergence theorem assumes. Only firmly
/// nonexpansive and strongly quasinonexpansive operators additionally force
/// displacements to vanish along approximating sequences, which is what the
/// unprojected Halpern and Picard drivers require.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyClass {
    Nonexpansive,
    FirmlyNonexpansive,
    Quasinonexpansive,
    StronglyQuasinonexpansive,
}

impl PropertyClass {
    /// Quasinonexpansive under the standing nonempty-fixed-point hypothesis.
    pub fn is_quasinonexpansive(self) -> bool {
        true
    }

    /// Whether the class certifies strong quasinonexpansiveness. A firmly
    /// nonexpansive mapping with a fixed point qualifies; plain nonexpansive
    /// or quasinonexpansive mappings do not (a rotation is the standard
    /// counterexample).
    pub fn is_strongly_quasinonexpansive(self) -> bool {
        matches!(
            self,
            PropertyClass::FirmlyNonexpansive | PropertyClass::StronglyQuasinonexpansive
        )
    }
}

impl std::fmt::Display for PropertyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PropertyClass::Nonexpansive => "nonexpansive",
            PropertyClass::FirmlyNonexpansive => "firmly nonexpansive",
            PropertyClass::Quasinonexpansive => "quasinonexpansive",
            PropertyClass::StronglyQuasinonexpansive => "strongly quasinonexpansive",
        };
        f.write_str(name)
    }
}

/// How an operator is built.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorKind {
    /// `P_D`, the nearest-point map of a directly projectable set.
    MetricProjection(ConvexSet),
    /// Polyak step `x - (f(x)/||g||^2) g` when `f(x) > 0`, identity otherwise.
    SubgradientProjection(ConvexFunctional),
    /// `λ I + (1-λ) T`.
    Relaxed { inner: Box<Operator>, lambda: f64 },
    /// `T ∘ P_C`: extends an operator whose mathematical domain is `C`
    /// to a self-mapping of the whole space.
    ComposedWithProjection {
        inner: Box<Operator>,
        domain: ConvexSet,
    },
    /// `x ↦ A x + c` with `||A||_2 <= 1`; a test operator with an
    /// analytically known fixed set.
    Affine { matrix: Matrix, translation: Vector },
}

/// A mapping of `R^n` into itself with its verified property class and the
/// declared demiclosedness-at-zero assumption.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    kind: OperatorKind,
    property_class: PropertyClass,
    demiclosed_at_zero: bool,
    dim: usize,
}

impl Operator {
    /// Metric projection onto a directly projectable set.
    pub fn metric_projection(set: ConvexSet) -> Result<Self> {
        if matches!(set, ConvexSet::Intersection(_)) {
            return Err(Error::NotDirectlyProjectable);
        }
        Ok(Operator {
            dim: set.dim(),
            kind: OperatorKind::MetricProjection(set),
            property_class: PropertyClass::FirmlyNonexpansive,
            demiclosed_at_zero: true,
        })
    }

    /// Subgradient projection of a convex functional.
    pub fn subgradient_projection(functional: ConvexFunctional) -> Result<Self> {
        Ok(Operator {
            dim: functional.dim(),
            kind: OperatorKind::SubgradientProjection(functional),
            property_class: PropertyClass::StronglyQuasinonexpansive,
            demiclosed_at_zero: true,
        })
    }

    /// Relaxation `λ I + (1-λ) T`, `0 < λ < 1`. Shares the fixed point set
    /// of `T` and upgrades any quasinonexpansive `T` to a strongly
    /// quasinonexpansive mapping.
    pub fn relaxed(inner: Operator, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::construction(
                "operator",
                format!("relaxation parameter must lie in (0, 1), got {lambda}"),
            ));
        }
        Ok(Operator {
            dim: inner.dim,
            kind: OperatorKind::Relaxed {
                inner: Box::new(inner),
                lambda,
            },
            property_class: PropertyClass::StronglyQuasinonexpansive,
            demiclosed_at_zero: true,
        })
    }

    /// Composition `T ∘ P_C`. Keeps the fixed points of `T` that lie in `C`
    /// and preserves strong quasinonexpansiveness of `T`.
    pub fn composed_with_projection(inner: Operator, domain: ConvexSet) -> Result<Self> {
        if matches!(domain, ConvexSet::Intersection(_)) {
            return Err(Error::NotDirectlyProjectable);
        }
        if domain.dim() != inner.dim {
            return Err(Error::DimensionMismatch {
                expected: inner.dim,
                got: domain.dim(),
            });
        }
        let property_class = if inner.property_class.is_strongly_quasinonexpansive() {
            PropertyClass::StronglyQuasinonexpansive
        } else {
            PropertyClass::Quasinonexpansive
        };
        Ok(Operator {
            dim: inner.dim,
            kind: OperatorKind::ComposedWithProjection {
                inner: Box::new(inner),
                domain,
            },
            property_class,
            demiclosed_at_zero: true,
        })
    }

    /// Affine map `x ↦ A x + c`, accepted only when `||A||_2 <= 1` (power
    /// iteration at tolerance 1e-8).
    pub fn affine(matrix: Matrix, translation: Vector) -> Result<Self> {
        if matrix.dim() != translation.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                got: translation.dim(),
            });
        }
        let sigma = matrix.spectral_norm(1e-8)?;
        if sigma > 1.0 + 1e-8 {
            return Err(Error::construction(
                "operator",
                format!("affine matrix has spectral norm {sigma:.6} > 1, not nonexpansive"),
            ));
        }
        Ok(Operator {
            dim: translation.dim(),
            kind: OperatorKind::Affine {
                matrix,
                translation,
            },
            property_class: PropertyClass::Nonexpansive,
            demiclosed_at_zero: true,
        })
    }

    /// Overrides the demiclosedness-at-zero declaration. All built-in
    /// constructions are demiclosed at zero; this exists so tests can
    /// exercise the hypothesis gate of the drivers.
    pub fn declare_demiclosed_at_zero(mut self, flag: bool) -> Self {
        self.demiclosed_at_zero = flag;
        self
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn property_class(&self) -> PropertyClass {
        self.property_class
    }

    pub fn demiclosed_at_zero(&self) -> bool {
        self.demiclosed_at_zero
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates the operator at `x`.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        match &self.kind {
            OperatorKind::MetricProjection(set) => set.project(x),
            OperatorKind::SubgradientProjection(f) => {
                let value = f.eval(x)?;
                if value <= 0.0 {
                    return Ok(x.clone());
                }
                let g = f.subgradient(x)?;
                let gg = g.inner(&g)?;
                if gg == 0.0 {
                    return Err(Error::InconsistentFunctional { value });
                }
                axpby(1.0, x, -value / gg, &g)
            }
            OperatorKind::Relaxed { inner, lambda } => {
                let image = inner.apply(x)?;
                axpby(*lambda, x, 1.0 - lambda, &image)
            }
            OperatorKind::ComposedWithProjection { inner, domain } => {
                inner.apply(&domain.project(x)?)
            }
            OperatorKind::Affine {
                matrix,
                translation,
            } => matrix.matvec(x)?.add(translation),
        }
    }

    /// `||T x - x||`, the fixed point defect at `x`.
    pub fn displacement(&self, x: &Vector) -> Result<f64> {
        self.apply(x)?.distance(x)
    }
}

/// `max_i ||T_i x - x||` over a nonempty family: the stopping diagnostic of
/// every iteration driver.
pub fn fixed_point_residual(ops: &[Operator], x: &Vector) -> Result<f64> {
    if ops.is_empty() {
        return Err(Error::EmptyOperatorList);
    }
    let mut worst = 0.0f64;
    for op in ops {
        worst = worst.max(op.displacement(x)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn unit_ball(dim: usize) -> ConvexSet {
        ConvexSet::ball(Vector::zeros(dim).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn property_classes_follow_the_construction_rules() {
        let proj = Operator::metric_projection(unit_ball(2)).unwrap();
        assert_eq!(proj.property_class(), PropertyClass::FirmlyNonexpansive);
        assert!(proj.property_class().is_strongly_quasinonexpansive());

        let relaxed = Operator::relaxed(proj.clone(), 0.5).unwrap();
        assert_eq!(
            relaxed.property_class(),
            PropertyClass::StronglyQuasinonexpansive
        );

        let composed =
            Operator::composed_with_projection(proj, unit_ball(2)).unwrap();
        assert_eq!(
            composed.property_class(),
            PropertyClass::StronglyQuasinonexpansive
        );

        let sub = Operator::subgradient_projection(
            ConvexFunctional::max_affine(vec![(v(&[1.0, 0.0]), 0.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            sub.property_class(),
            PropertyClass::StronglyQuasinonexpansive
        );

        let rotation = Operator::affine(
            Matrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap(),
            Vector::zeros(2).unwrap(),
        )
        .unwrap();
        assert_eq!(rotation.property_class(), PropertyClass::Nonexpansive);
        assert!(!rotation.property_class().is_strongly_quasinonexpansive());

        // a composition of a merely nonexpansive map stays short of strong
        let weak = Operator::composed_with_projection(rotation, unit_ball(2)).unwrap();
        assert_eq!(weak.property_class(), PropertyClass::Quasinonexpansive);
    }

    #[test]
    fn relaxed_preserves_fixed_points_in_affine_arithmetic() {
        let proj = Operator::metric_projection(unit_ball(2)).unwrap();
        let relaxed = Operator::relaxed(proj, 0.3).unwrap();
        let z = v(&[0.1, -0.7]); // inside the ball, hence fixed
        let image = relaxed.apply(&z).unwrap();
        assert_eq!(image, axpby(0.3, &z, 0.7, &z).unwrap());
        assert!(image.distance(&z).unwrap() <= EPS_FIX);
    }

    #[test]
    fn subgradient_projection_fixes_feasible_points() {
        let f = ConvexFunctional::max_affine(vec![(v(&[1.0, 0.0]), -1.0)]).unwrap();
        let op = Operator::subgradient_projection(f).unwrap();
        let x = v(&[0.5, 3.0]); // f(x) = -0.5 <= 0
        assert_eq!(op.apply(&x).unwrap(), x);
    }

    #[test]
    fn subgradient_projection_matches_halfspace_projection() {
        // for f(x) = <a, x> - b the Polyak step and the metric projection
        // onto {<a, x> <= b} are the same map: two routes, one answer
        let a = v(&[2.0, -1.0, 0.5]);
        let b = 0.75;
        let sub = Operator::subgradient_projection(
            ConvexFunctional::max_affine(vec![(a.clone(), -b)]).unwrap(),
        )
        .unwrap();
        let proj =
            Operator::metric_projection(ConvexSet::halfspace(a, b).unwrap()).unwrap();
        for x in [v(&[5.0, 1.0, -2.0]), v(&[-1.0, 0.0, 0.0]), v(&[0.4, 0.3, 0.2])] {
            let lhs = sub.apply(&x).unwrap();
            let rhs = proj.apply(&x).unwrap();
            assert!(lhs.distance(&rhs).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn inconsistent_functional_is_reported() {
        // f(x) = 1 everywhere: positive with zero subgradient
        let f = ConvexFunctional::max_affine(vec![(v(&[0.0, 0.0]), 1.0)]).unwrap();
        let op = Operator::subgradient_projection(f).unwrap();
        assert_eq!(
            op.apply(&v(&[0.0, 0.0])).unwrap_err(),
            Error::InconsistentFunctional { value: 1.0 }
        );
    }

    #[test]
    fn displacement_is_zero_on_fixed_points_and_radial_on_the_ball() {
        let proj = Operator::metric_projection(unit_ball(2)).unwrap();
        assert_eq!(proj.displacement(&v(&[0.2, 0.2])).unwrap(), 0.0);
        assert!((proj.displacement(&v(&[2.0, 0.0])).unwrap() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn relaxation_scales_displacement() {
        let mut seed = 41u64;
        let proj = Operator::metric_projection(unit_ball(3)).unwrap();
        for lambda in [0.25, 0.5, 0.9] {
            let relaxed = Operator::relaxed(proj.clone(), lambda).unwrap();
            for _ in 0..20 {
                // cheap deterministic pseudo-random points
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                let x = v(&[
                    (seed % 1000) as f64 / 100.0 - 5.0,
                    ((seed >> 10) % 1000) as f64 / 100.0 - 5.0,
                    ((seed >> 20) % 1000) as f64 / 100.0 - 5.0,
                ]);
                let lhs = relaxed.displacement(&x).unwrap();
                let rhs = (1.0 - lambda) * proj.displacement(&x).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
            }
        }
    }

    #[test]
    fn composition_projects_into_the_domain_first() {
        let ball = unit_ball(2);
        let proj = Operator::metric_projection(
            ConvexSet::halfspace(v(&[0.0, 1.0]), 0.0).unwrap(),
        )
        .unwrap();
        let composed = Operator::composed_with_projection(proj, ball.clone()).unwrap();
        let x = v(&[10.0, 0.0]);
        // P_C sends x to (1, 0), already in the halfspace
        assert_eq!(composed.apply(&x).unwrap(), ball.project(&x).unwrap());
    }

    #[test]
    fn composition_keeps_common_fixed_points() {
        let ball = unit_ball(2);
        let half = ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
        let composed = Operator::composed_with_projection(
            Operator::metric_projection(half).unwrap(),
            ball,
        )
        .unwrap();
        let z = v(&[-0.5, 0.5]); // in the ball and in the halfspace
        assert_eq!(composed.apply(&z).unwrap(), z);
    }

    #[test]
    fn affine_gate_rejects_expanding_matrices() {
        let stretch = Matrix::from_rows(vec![vec![1.1, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(Operator::affine(stretch, Vector::zeros(2).unwrap()).is_err());
        let rotation = Matrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(Operator::affine(rotation, Vector::zeros(2).unwrap()).is_ok());
    }

    #[test]
    fn residual_is_the_max_of_individual_displacements() {
        let ops = vec![
            Operator::metric_projection(unit_ball(2)).unwrap(),
            Operator::metric_projection(ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap())
                .unwrap(),
            Operator::metric_projection(
                ConvexSet::boxed(v(&[-0.1, -0.1]), v(&[0.1, 0.1])).unwrap(),
            )
            .unwrap(),
        ];
        let x = v(&[2.0, 2.0]);
        let expected = ops
            .iter()
            .map(|op| op.displacement(&x).unwrap())
            .fold(0.0f64, f64::max);
        assert_eq!(fixed_point_residual(&ops, &x).unwrap(), expected);

        let z = v(&[-0.05, 0.0]); // common fixed point of all three
        assert_eq!(fixed_point_residual(&ops, &z).unwrap(), 0.0);

        assert_eq!(
            fixed_point_residual(&[], &x).unwrap_err(),
            Error::EmptyOperatorList
        );
        let single = &ops[..1];
        assert_eq!(
            fixed_point_residual(single, &x).unwrap(),
            ops[0].displacement(&x).unwrap()
        );
    }

    #[test]
    fn metric_projection_rejects_intersection_sets() {
        let h = ConvexSet::halfspace(v(&[1.0]), 0.0).unwrap();
        let inter = ConvexSet::intersection(vec![h.clone(), h]).unwrap();
        assert_eq!(
            Operator::metric_projection(inter).unwrap_err(),
            Error::NotDirectlyProjectable
        );
    }
}
