//! The iteration drivers: projected Halpern, Halpern, and Picard, each
//! combined with the greedy parallel selection rule.
//!
//! All three schemes share one loop shape. At iteration `n` the family is
//! evaluated at `x_n`, the member of largest displacement is selected, and
//! the next iterate is formed from its image:
//!
//! ```text
//! projected Halpern   x_{n+1} = P_C( α_n u + (1-α_n)( β_n x_n + (1-β_n) T_{i_n} x_n ) )
//! Halpern             x_{n+1} = α_n u + (1-α_n) S_{i_n} x_n
//! Picard              x_{n+1} = S_{i_n} x_n
//! ```
//!
//! The selected displacement coincides with the family residual
//! `max_i ||T_i x_n - x_n||`, which is the stopping diagnostic: the run
//! halts once it reaches `residual_tol`, or at `max_iters`, or when the
//! arithmetic overflows. Anchored schemes head for the common fixed point
//! nearest the anchor; note that residual stopping certifies proximity to
//! the common fixed point set, not to that particular point, so loose
//! tolerances can halt at a different near-fixed point than a longer run
//! would reach.

mod schedule;
mod trace;

pub use schedule::{
    validate_schedule, AlphaRule, BetaRule, ConditionEntry, Schedule, ScheduleCondition,
    ScheduleReport, SchemeKind,
};
pub use trace::{RunTrace, TraceMeta, TraceRow};

use crate::error::{Error, Result};
use crate::hilbert::{axpby, Vector};
use crate::operators::{ConvexSet, Operator};
use crate::selection::{select, Selection};

/// Which iterates to keep alongside the row trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnapshotPolicy {
    None,
    Final,
    EveryK(usize),
}

/// Run parameters shared by all schemes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Anchor `u`; required by the Halpern schemes, forbidden for Picard.
    pub anchor: Option<Vector>,
    /// `x_1`.
    pub initial: Vector,
    pub max_iters: usize,
    pub residual_tol: f64,
    pub trace_every: usize,
    pub snapshot_policy: SnapshotPolicy,
    /// Optional comparison point; when set, every trace row records
    /// `||x_n - reference||`.
    pub reference: Option<Vector>,
}

impl RunConfig {
    pub fn new(initial: Vector) -> Self {
        RunConfig {
            anchor: None,
            initial,
            max_iters: 1_000_000,
            residual_tol: 1e-8,
            trace_every: 100,
            snapshot_policy: SnapshotPolicy::None,
            reference: None,
        }
    }

    pub fn with_anchor(mut self, u: Vector) -> Self {
        self.anchor = Some(u);
        self
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    ResidualMet,
    MaxIters,
    NumericalFailure,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::ResidualMet => "residual_met",
            StopReason::MaxIters => "max_iters",
            StopReason::NumericalFailure => "numerical_failure",
        }
    }
}

/// Outcome of a run. `converged` holds exactly when the stop reason is
/// [`StopReason::ResidualMet`]; on numerical failure `final_iterate` is the
/// last finite iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub final_iterate: Vector,
    pub iterations_used: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub trace: RunTrace,
}

/// `α u + (1-α) y`: the anchored step of the Halpern schemes.
pub fn anchor_step(u: &Vector, y: &Vector, alpha: f64) -> Result<Vector> {
    axpby(alpha, u, 1.0 - alpha, y)
}

/// `β x + (1-β) image`: the inner blend of the projected Halpern update,
/// identical to applying the relaxation `β I + (1-β) T` at `x`.
pub fn relaxation_blend(x: &Vector, image: &Vector, beta: f64) -> Result<Vector> {
    axpby(beta, x, 1.0 - beta, image)
}

/// Runs `x_{n+1} = P_C(α_n u + (1-α_n)(β_n x_n + (1-β_n) T_{i_n} x_n))`
/// over a family of quasinonexpansive operators on the domain `C`.
///
/// `x_1` is projected onto the domain if it starts outside. Every iterate
/// stays in the domain by construction.
pub fn projected_halpern(
    ops: &[Operator],
    domain: &ConvexSet,
    schedule: &Schedule,
    config: &RunConfig,
) -> Result<RunResult> {
    let u = require_anchor(config, SchemeKind::ProjectedHalpern)?;
    check_family(ops, &config.initial, |_op| Ok(()))?;
    if matches!(domain, ConvexSet::Intersection(_)) {
        return Err(Error::Config(
            "projected_halpern domain must be directly projectable; \
             intersection sets are not"
                .into(),
        ));
    }
    if domain.dim() != config.initial.dim() {
        return Err(Error::DimensionMismatch {
            expected: config.initial.dim(),
            got: domain.dim(),
        });
    }
    check_schedule(schedule, SchemeKind::ProjectedHalpern)?;
    check_config(config)?;

    let x1 = domain.project(&config.initial)?;
    run_loop(
        ops,
        SchemeKind::ProjectedHalpern,
        x1,
        config,
        |n| Some(schedule.alpha(n)),
        |n, x, sel| {
            let blend = relaxation_blend(x, sel.image(), schedule.beta(n))?;
            let composite = anchor_step(u, &blend, schedule.alpha(n))?;
            domain.project(&composite)
        },
    )
}

/// Runs `x_{n+1} = α_n u + (1-α_n) S_{i_n} x_n` over a family of strongly
/// quasinonexpansive self-mappings.
pub fn halpern(ops: &[Operator], schedule: &Schedule, config: &RunConfig) -> Result<RunResult> {
    let u = require_anchor(config, SchemeKind::Halpern)?;
    check_family(ops, &config.initial, require_strongly_quasinonexpansive)?;
    check_schedule(schedule, SchemeKind::Halpern)?;
    check_config(config)?;

    run_loop(
        ops,
        SchemeKind::Halpern,
        config.initial.clone(),
        config,
        |n| Some(schedule.alpha(n)),
        |n, _x, sel| anchor_step(u, sel.image(), schedule.alpha(n)),
    )
}

/// Runs the bare composition `x_{n+1} = S_{i_n} x_n`. No anchor and no
/// schedule; the run converges (weakly, which in `R^n` is in norm) toward
/// some common fixed point rather than an anchor-nearest one.
pub fn picard(ops: &[Operator], config: &RunConfig) -> Result<RunResult> {
    if config.anchor.is_some() {
        return Err(Error::Config(
            "picard takes no anchor; remove it or switch to a Halpern scheme".into(),
        ));
    }
    check_family(ops, &config.initial, require_strongly_quasinonexpansive)?;
    check_config(config)?;

    run_loop(
        ops,
        SchemeKind::Picard,
        config.initial.clone(),
        config,
        |_n| None,
        |_n, _x, sel| Ok(sel.image().clone()),
    )
}

fn require_anchor(config: &RunConfig, scheme: SchemeKind) -> Result<&Vector> {
    let u = config
        .anchor
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{} requires an anchor u", scheme.name())))?;
    if u.dim() != config.initial.dim() {
        return Err(Error::DimensionMismatch {
            expected: config.initial.dim(),
            got: u.dim(),
        });
    }
    Ok(u)
}

fn require_strongly_quasinonexpansive(op: &Operator) -> Result<()> {
    if !op.property_class().is_strongly_quasinonexpansive() {
        return Err(Error::Config(format!(
            "operator is {}, but the scheme requires a strongly quasinonexpansive \
             self-mapping; wrap it in a relaxation or a composition with a projection",
            op.property_class()
        )));
    }
    Ok(())
}

fn check_family(
    ops: &[Operator],
    initial: &Vector,
    extra: impl Fn(&Operator) -> Result<()>,
) -> Result<()> {
    if ops.is_empty() {
        return Err(Error::EmptyOperatorList);
    }
    for (i, op) in ops.iter().enumerate() {
        if op.dim() != initial.dim() {
            return Err(Error::DimensionMismatch {
                expected: initial.dim(),
                got: op.dim(),
            });
        }
        if !op.demiclosed_at_zero() {
            return Err(Error::Config(format!(
                "operator {} is not declared demiclosed at zero, so a vanishing \
                 residual would certify nothing",
                i + 1
            )));
        }
        extra(op).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("operator {}: {msg}", i + 1)),
            other => other,
        })?;
    }
    Ok(())
}

fn check_schedule(schedule: &Schedule, scheme: SchemeKind) -> Result<()> {
    let report = validate_schedule(schedule, scheme);
    if !report.passes() {
        return Err(Error::Config(format!(
            "schedule fails {} condition(s) for {}: {}",
            report.failures().len(),
            scheme.name(),
            report.failures().join(", ")
        )));
    }
    Ok(())
}

fn check_config(config: &RunConfig) -> Result<()> {
    if !config.residual_tol.is_finite() || config.residual_tol <= 0.0 {
        return Err(Error::Config(format!(
            "residual_tol must be a positive real, got {}",
            config.residual_tol
        )));
    }
    if config.max_iters == 0 {
        return Err(Error::Config("max_iters must be at least 1".into()));
    }
    if config.trace_every == 0 {
        return Err(Error::Config("trace_every must be at least 1".into()));
    }
    if let SnapshotPolicy::EveryK(0) = config.snapshot_policy {
        return Err(Error::Config("snapshot stride must be at least 1".into()));
    }
    if let Some(r) = &config.reference {
        if r.dim() != config.initial.dim() {
            return Err(Error::DimensionMismatch {
                expected: config.initial.dim(),
                got: r.dim(),
            });
        }
    }
    Ok(())
}

fn run_loop(
    ops: &[Operator],
    scheme: SchemeKind,
    x1: Vector,
    config: &RunConfig,
    alpha_of: impl Fn(usize) -> Option<f64>,
    update: impl Fn(usize, &Vector, &Selection) -> Result<Vector>,
) -> Result<RunResult> {
    let mut trace = RunTrace::new(TraceMeta {
        scheme,
        dim: x1.dim(),
        operator_count: ops.len(),
    });
    let mut x = x1;

    let record_row = |trace: &mut RunTrace, n: usize, x: &Vector, sel: &Selection| {
        if trace.rows.last().is_some_and(|row| row.n == n) {
            return;
        }
        let dist_to_reference = config
            .reference
            .as_ref()
            .map(|r| r.distance(x).expect("dimension checked up front"));
        trace.rows.push(TraceRow {
            n,
            alpha_n: alpha_of(n),
            selected_index: sel.index(),
            selected_displacement: sel.displacement(),
            residual: sel.displacement(),
            dist_to_reference,
        });
    };
    let record_snapshot = |trace: &mut RunTrace, n: usize, x: &Vector, final_row: bool| {
        let due = match config.snapshot_policy {
            SnapshotPolicy::None => false,
            SnapshotPolicy::Final => final_row,
            SnapshotPolicy::EveryK(k) => final_row || n == 1 || n.is_multiple_of(k),
        };
        if due && trace.snapshots.last().map(|(m, _)| *m) != Some(n) {
            trace.snapshots.push((n, x.clone()));
        }
    };

    let mut n = 1usize;
    loop {
        let sel = match select(ops, &x) {
            Ok(sel) => sel,
            Err(Error::NonFinite { .. }) => {
                // evaluation overflowed; x itself is still finite
                return Ok(finish(
                    trace,
                    x,
                    n,
                    f64::INFINITY,
                    StopReason::NumericalFailure,
                ));
            }
            Err(other) => return Err(other),
        };
        let residual = sel.displacement();
        record_snapshot(&mut trace, n, &x, false);

        if residual <= config.residual_tol {
            record_row(&mut trace, n, &x, &sel);
            record_snapshot(&mut trace, n, &x, true);
            return Ok(finish(trace, x, n, residual, StopReason::ResidualMet));
        }
        if n == config.max_iters {
            record_row(&mut trace, n, &x, &sel);
            record_snapshot(&mut trace, n, &x, true);
            return Ok(finish(trace, x, n, residual, StopReason::MaxIters));
        }
        if n == 1 || n.is_multiple_of(config.trace_every) {
            record_row(&mut trace, n, &x, &sel);
        }

        match update(n, &x, &sel) {
            Ok(next) => x = next,
            Err(Error::NonFinite { .. }) => {
                record_row(&mut trace, n, &x, &sel);
                record_snapshot(&mut trace, n, &x, true);
                return Ok(finish(trace, x, n, residual, StopReason::NumericalFailure));
            }
            Err(other) => return Err(other),
        }
        n += 1;
    }
}

fn finish(
    trace: RunTrace,
    final_iterate: Vector,
    iterations_used: usize,
    final_residual: f64,
    stop_reason: StopReason,
) -> RunResult {
    RunResult {
        final_iterate,
        iterations_used,
        final_residual,
        converged: stop_reason == StopReason::ResidualMet,
        stop_reason,
        trace,
    }
}
