//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or running a solve.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two objects that must share an ambient dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A vector was constructed (or produced by arithmetic) with a NaN or
    /// infinite coordinate. Construction is the NaN firewall: iteration
    /// drivers map this error to a `NumericalFailure` stop reason.
    #[error("non-finite value at coordinate {index}")]
    NonFinite { index: usize },

    /// Metric projection was requested on an `Intersection` set, which has
    /// no closed-form nearest point. Use `oracle::project_intersection`.
    #[error("intersection sets are not directly projectable; use oracle::project_intersection")]
    NotDirectlyProjectable,

    /// A subgradient projection step found a zero subgradient at an
    /// infeasible point: the functional attains a positive minimum, so its
    /// zero-sublevel set is empty.
    #[error("inconsistent functional: zero subgradient at a point with f(x) = {value} > 0")]
    InconsistentFunctional { value: f64 },

    /// An operation over a family of operators received an empty family.
    #[error("empty operator list")]
    EmptyOperatorList,

    /// A set, operator, functional or schedule violated a construction rule.
    #[error("invalid {what}: {reason}")]
    Construction { what: &'static str, reason: String },

    /// A scheme was asked to run with inputs that violate its hypotheses
    /// (wrong property class, unsatisfied schedule conditions, missing
    /// anchor, ...). Raised before iteration 1.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A problem file failed validation; `path` locates the offending field.
    #[error("problem file: {path}: {reason}")]
    Problem { path: String, reason: String },

    /// Dykstra's algorithm failed to contract within the sweep budget,
    /// which usually means the sets have no common point.
    #[error(
        "possibly empty intersection: sweep change {last_change:e} after {sweeps} sweeps (tol {tol:e})"
    )]
    PossiblyEmptyIntersection {
        sweeps: usize,
        last_change: f64,
        tol: f64,
    },

    /// The fixed point set of an operator family cannot be reduced to
    /// projectable sets, so no ground truth is computable.
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
}

impl Error {
    pub(crate) fn construction(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Construction {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn problem(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Problem {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
