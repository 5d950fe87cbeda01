//! Problem model and file ingestion.
//!
//! A problem file is a TOML document declaring the ambient dimension, the
//! operator family, the scheme, and its parameters. The exact field names
//! are normative and documented in `docs/problem-format.md`. Operator order
//! is semantically meaningful: selection ties break to the lowest index, so
//! reordering the family can change which iterate sequence is produced.

mod file;

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::{ConvexSet, Operator, OperatorKind};
use crate::oracle;
use crate::schemes::{
    self, validate_schedule, RunConfig, RunResult, Schedule, SchemeKind,
};

/// Stopping and tracing parameters as written in a problem file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunSettings {
    pub max_iters: usize,
    pub residual_tol: f64,
    pub trace_every: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            max_iters: 1_000_000,
            residual_tol: 1e-8,
            trace_every: 100,
        }
    }
}

/// A fully validated common fixed point problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub dim: usize,
    pub scheme: SchemeKind,
    pub operators: Vec<Operator>,
    /// Outer constraint set `C`; present exactly for the projected scheme.
    pub domain: Option<ConvexSet>,
    /// Anchor `u`; present exactly for the anchored schemes.
    pub anchor: Option<Vector>,
    pub schedule: Schedule,
    pub initial: Vector,
    pub run: RunSettings,
    /// Advisory test metadata; the solver never reads it.
    pub known_solution: Option<Vector>,
}

impl Problem {
    /// Parses and fully validates a problem document.
    pub fn from_toml_str(text: &str) -> Result<Problem> {
        let problem = Problem::parse_unvalidated(text)?;
        problem.validate()?;
        Ok(problem)
    }

    /// Parses a problem document enforcing only per-component invariants,
    /// skipping the cross-component rules (anchor/domain presence, operator
    /// classes, schedule-scheme fit). This is what `schedule-check` uses to
    /// report on files a full load would reject.
    pub fn parse_unvalidated(text: &str) -> Result<Problem> {
        file::parse(text)
    }

    /// Serializes the problem back into its file form. Numbers round-trip
    /// exactly: loading the output yields a structurally identical problem.
    pub fn to_toml_string(&self) -> String {
        file::serialize(self)
    }

    /// Re-checks every structural invariant. `from_toml_str` runs this
    /// automatically; it is public for problems assembled in code.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::problem("dim", "must be a positive integer"));
        }
        if self.operators.is_empty() {
            return Err(Error::problem("operators", "must not be empty"));
        }
        match (self.scheme.is_anchored(), &self.anchor) {
            (true, None) => {
                return Err(Error::problem(
                    "anchor",
                    format!("required by the {} scheme", self.scheme.name()),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::problem(
                    "anchor",
                    "the picard scheme takes no anchor",
                ))
            }
            _ => {}
        }
        match (self.scheme == SchemeKind::ProjectedHalpern, &self.domain) {
            (true, None) => {
                return Err(Error::problem(
                    "domain",
                    "required by the projected_halpern scheme",
                ))
            }
            (false, Some(_)) => {
                return Err(Error::problem(
                    "domain",
                    format!("the {} scheme takes no domain", self.scheme.name()),
                ))
            }
            _ => {}
        }
        if let Some(domain) = &self.domain {
            if matches!(domain, ConvexSet::Intersection(_)) {
                return Err(Error::problem(
                    "domain",
                    "must be directly projectable; intersection sets are not",
                ));
            }
            if domain.dim() != self.dim {
                return Err(Error::problem(
                    "domain",
                    format!("dimension {} does not match dim = {}", domain.dim(), self.dim),
                ));
            }
        }
        for (name, vector) in [
            ("anchor", &self.anchor),
            ("known_solution", &self.known_solution),
        ] {
            if let Some(v) = vector {
                if v.dim() != self.dim {
                    return Err(Error::problem(
                        name,
                        format!("dimension {} does not match dim = {}", v.dim(), self.dim),
                    ));
                }
            }
        }
        if self.initial.dim() != self.dim {
            return Err(Error::problem(
                "initial",
                format!(
                    "dimension {} does not match dim = {}",
                    self.initial.dim(),
                    self.dim
                ),
            ));
        }
        for (i, op) in self.operators.iter().enumerate() {
            let path = format!("operators[{i}]");
            if op.dim() != self.dim {
                return Err(Error::problem(
                    path,
                    format!("dimension {} does not match dim = {}", op.dim(), self.dim),
                ));
            }
            if self.scheme != SchemeKind::ProjectedHalpern
                && !op.property_class().is_strongly_quasinonexpansive()
            {
                return Err(Error::problem(
                    path,
                    format!(
                        "is {}, but the {} scheme requires strongly quasinonexpansive \
                         self-mappings; wrap it in a relaxation or a composition",
                        op.property_class(),
                        self.scheme.name()
                    ),
                ));
            }
            probe_level_sets(op, &path)?;
        }
        let report = validate_schedule(&self.schedule, self.scheme);
        if !report.passes() {
            return Err(Error::problem(
                "schedule",
                format!(
                    "fails the {} conditions: {}",
                    self.scheme.name(),
                    report.failures().join(", ")
                ),
            ));
        }
        if !self.run.residual_tol.is_finite() || self.run.residual_tol <= 0.0 {
            return Err(Error::problem(
                "run.residual_tol",
                format!("must be a positive real, got {}", self.run.residual_tol),
            ));
        }
        if self.run.max_iters == 0 {
            return Err(Error::problem("run.max_iters", "must be at least 1"));
        }
        if self.run.trace_every == 0 {
            return Err(Error::problem("run.trace_every", "must be at least 1"));
        }
        Ok(())
    }

    /// The run configuration this problem describes; callers may adjust it
    /// (tolerance overrides, snapshots, a reference point) before solving.
    pub fn run_config(&self) -> RunConfig {
        let mut config = RunConfig::new(self.initial.clone());
        config.anchor = self.anchor.clone();
        config.max_iters = self.run.max_iters;
        config.residual_tol = self.run.residual_tol;
        config.trace_every = self.run.trace_every;
        config
    }

    /// Runs the configured scheme on the operator family.
    pub fn solve(&self) -> Result<RunResult> {
        self.solve_with(&self.run_config())
    }

    /// Runs the configured scheme under a caller-adjusted configuration.
    pub fn solve_with(&self, config: &RunConfig) -> Result<RunResult> {
        match self.scheme {
            SchemeKind::ProjectedHalpern => {
                let domain = self.domain.as_ref().ok_or_else(|| {
                    Error::problem("domain", "required by the projected_halpern scheme")
                })?;
                schemes::projected_halpern(&self.operators, domain, &self.schedule, config)
            }
            SchemeKind::Halpern => schemes::halpern(&self.operators, &self.schedule, config),
            SchemeKind::Picard => schemes::picard(&self.operators, config),
        }
    }
}

/// Load-time nonemptiness probe for subgradient-projection level sets, as
/// far as the oracle can see them. Non-reducible functionals are a
/// documented assumption and pass unprobed.
fn probe_level_sets(op: &Operator, path: &str) -> Result<()> {
    match op.kind() {
        OperatorKind::SubgradientProjection(_) => match oracle::fixed_point_sets(op) {
            Ok(sets) => {
                let origin = Vector::zeros(op.dim())?;
                let cfg = oracle::OracleConfig::new(1e-9, 20_000)?;
                match oracle::project_intersection(&sets, &origin, &cfg) {
                    Ok(_) => Ok(()),
                    Err(Error::PossiblyEmptyIntersection { .. }) => Err(Error::problem(
                        format!("{path}.functional"),
                        "level set appears empty: the oracle found no feasible point",
                    )),
                    Err(other) => Err(other),
                }
            }
            Err(Error::OracleUnavailable(_)) => Ok(()),
            Err(Error::Construction { reason, .. }) => Err(Error::problem(
                format!("{path}.functional"),
                format!("level set is empty: {reason}"),
            )),
            Err(other) => Err(other),
        },
        OperatorKind::Relaxed { inner, .. } => probe_level_sets(inner, &format!("{path}.inner")),
        OperatorKind::ComposedWithProjection { inner, .. } => {
            probe_level_sets(inner, &format!("{path}.inner"))
        }
        _ => Ok(()),
    }
}
