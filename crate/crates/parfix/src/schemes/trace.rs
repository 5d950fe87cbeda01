//! Per-run iteration records.

use crate::hilbert::Vector;
use crate::schemes::SchemeKind;

/// One traced iteration. `n` follows the mathematical indexing: the first
/// evaluated iterate is `x_1`. `selected_index` is the 0-based position in
/// the operator family; user-facing output prints it 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    /// Anchor coefficient used at this iteration; absent for Picard runs.
    pub alpha_n: Option<f64>,
    pub selected_index: usize,
    pub selected_displacement: f64,
    /// `max_i ||T_i x_n - x_n||`. Equals the selected displacement for the
    /// argmax selection rule; both are recorded.
    pub residual: f64,
    /// `||x_n - reference||` when the run was given a reference point
    /// (typically the oracle target `P_F(u)`); absent otherwise.
    pub dist_to_reference: Option<f64>,
}

/// Description of the run a trace belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceMeta {
    pub scheme: SchemeKind,
    pub dim: usize,
    pub operator_count: usize,
}

/// Rows are emitted at `n = 1`, every `trace_every` iterations, and at the
/// final iteration; `n` is strictly increasing. If a run aborts because an
/// operator evaluation overflowed, the trace ends at the last iterate that
/// could be evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub meta: TraceMeta,
    pub rows: Vec<TraceRow>,
    /// `(n, x_n)` pairs recorded according to the snapshot policy.
    pub snapshots: Vec<(usize, Vector)>,
}

impl RunTrace {
    pub(crate) fn new(meta: TraceMeta) -> Self {
        RunTrace {
            meta,
            rows: Vec::new(),
            snapshots: Vec::new(),
        }
    }
}
