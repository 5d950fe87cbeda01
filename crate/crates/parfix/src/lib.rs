//! # parfix
//!
//! A solver library for the common fixed point problem of a finite family
//! of quasinonexpansive mappings on `R^n`: find a point every member of the
//! family leaves fixed.
//!
//! The method is greedy and parallel. At each iteration every operator is
//! evaluated at the current point and the one that moves it farthest is
//! selected; its image then feeds one of three drivers:
//!
//! * [`schemes::projected_halpern`]: anchored iteration constrained to a
//!   convex domain, for quasinonexpansive families;
//! * [`schemes::halpern`]: anchored iteration on the whole space, for
//!   strongly quasinonexpansive families, converging to the common fixed
//!   point nearest the anchor;
//! * [`schemes::picard`]: bare composition, converging to some common
//!   fixed point.
//!
//! Operators are built from projectable convex sets ([`ConvexSet`]),
//! subgradient projections of convex functionals, relaxations, and
//! compositions with projections; each carries the strongest property
//! class its construction guarantees, and the drivers check those classes
//! against their hypotheses before iterating.
//!
//! The [`oracle`] module computes ground truth independently (Dykstra's
//! algorithm), so anchored runs can be checked against the exact nearest
//! common fixed point. [`problems`] loads whole problem descriptions from
//! TOML files; the `parfix` command-line tool drives them.

pub mod error;
pub mod hilbert;
pub mod operators;
pub mod oracle;
pub mod problems;
pub mod schemes;
pub mod selection;

pub use error::{Error, Result};
pub use hilbert::{axpby, Vector};
pub use operators::{
    fixed_point_residual, ConvexFunctional, ConvexSet, Matrix, Operator, OperatorKind,
    PropertyClass,
};
pub use problems::{Problem, RunSettings};
pub use schemes::{
    halpern, picard, projected_halpern, validate_schedule, AlphaRule, BetaRule, RunConfig,
    RunResult, RunTrace, Schedule, ScheduleReport, SchemeKind, SnapshotPolicy, StopReason,
    TraceRow,
};
pub use selection::{select, select_with_tolerance, Selection};
