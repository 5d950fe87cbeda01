//! Step-size schedules and their per-scheme validity conditions.
//!
//! Divergence and vanishing of `{α_n}` are judged from the declared family,
//! never by sampling: `Σ a/(n+c)^p` diverges iff `p <= 1` and vanishes iff
//! `p > 0`, and a constant sequence diverges but never vanishes.

use crate::error::{Error, Result};

/// Declared family of the anchor coefficients `{α_n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaRule {
    /// `α_n = a / (n + c)^p`
    PowerLaw { a: f64, c: f64, p: f64 },
    /// `α_n = v`
    Constant { v: f64 },
}

/// Declared family of the inertial coefficients `{β_n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BetaRule {
    /// `β_n = v`
    Constant { v: f64 },
    /// `β_n = a / (n + c)^p`
    PowerLaw { a: f64, c: f64, p: f64 },
}

fn validate_power_law(a: f64, c: f64, p: f64, upper_open: bool) -> Result<()> {
    for (name, value) in [("a", a), ("c", c), ("p", p)] {
        if !value.is_finite() {
            return Err(Error::construction(
                "schedule",
                format!("power-law parameter {name} must be finite"),
            ));
        }
    }
    if a <= 0.0 {
        return Err(Error::construction(
            "schedule",
            format!("power-law scale a must be positive, got {a}"),
        ));
    }
    if c <= -1.0 {
        return Err(Error::construction(
            "schedule",
            format!("power-law shift c must exceed -1, got {c}"),
        ));
    }
    if p < 0.0 {
        return Err(Error::construction(
            "schedule",
            format!("power-law exponent p must be nonnegative, got {p} (terms would grow without bound)"),
        ));
    }
    // terms are nonincreasing in n, so the first term bounds the range
    let first = a / (1.0 + c).powf(p);
    if upper_open && first >= 1.0 {
        return Err(Error::construction(
            "schedule",
            format!("first term {first} is not below 1"),
        ));
    }
    if !upper_open && first > 1.0 {
        return Err(Error::construction(
            "schedule",
            format!("first term {first} exceeds 1"),
        ));
    }
    Ok(())
}

impl AlphaRule {
    fn validate(&self) -> Result<()> {
        match *self {
            AlphaRule::PowerLaw { a, c, p } => validate_power_law(a, c, p, false),
            AlphaRule::Constant { v } => {
                if v > 0.0 && v <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::construction(
                        "schedule",
                        format!("constant alpha must lie in (0, 1], got {v}"),
                    ))
                }
            }
        }
    }

    fn value(&self, n: usize) -> f64 {
        match *self {
            AlphaRule::PowerLaw { a, c, p } => a / (n as f64 + c).powf(p),
            AlphaRule::Constant { v } => v,
        }
    }

    /// Whether `Σ α_n = ∞`, decided from the family parameters.
    pub fn divergent_sum(&self) -> bool {
        match *self {
            AlphaRule::PowerLaw { p, .. } => p <= 1.0,
            AlphaRule::Constant { .. } => true,
        }
    }

    /// Whether `α_n → 0`, decided from the family parameters.
    pub fn vanishing(&self) -> bool {
        match *self {
            AlphaRule::PowerLaw { p, .. } => p > 0.0,
            AlphaRule::Constant { .. } => false,
        }
    }
}

impl BetaRule {
    fn validate(&self) -> Result<()> {
        match *self {
            BetaRule::PowerLaw { a, c, p } => validate_power_law(a, c, p, true),
            BetaRule::Constant { v } => {
                if v > 0.0 && v < 1.0 {
                    Ok(())
                } else {
                    Err(Error::construction(
                        "schedule",
                        format!("constant beta must lie in (0, 1), got {v}"),
                    ))
                }
            }
        }
    }

    fn value(&self, n: usize) -> f64 {
        match *self {
            BetaRule::PowerLaw { a, c, p } => a / (n as f64 + c).powf(p),
            BetaRule::Constant { v } => v,
        }
    }

    /// Whether `inf_n β_n > 0`.
    pub fn inf_positive(&self) -> bool {
        match *self {
            BetaRule::PowerLaw { p, .. } => p == 0.0,
            BetaRule::Constant { .. } => true,
        }
    }

    /// Whether `sup_n β_n < 1`. Guaranteed by construction: the range check
    /// bounds every term by the first one, which must be below 1.
    pub fn sup_below_one(&self) -> bool {
        true
    }
}

/// The pair of coefficient sequences driving the anchored schemes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    alpha: AlphaRule,
    beta: BetaRule,
}

impl Schedule {
    /// Builds a schedule after checking that every emitted `α_n` lies in
    /// `(0, 1]` and every `β_n` in `(0, 1)`.
    pub fn new(alpha: AlphaRule, beta: BetaRule) -> Result<Self> {
        alpha.validate()?;
        beta.validate()?;
        Ok(Schedule { alpha, beta })
    }

    /// `α_n = 1/(n+1)`, `β_n = 1/2`: the simplest family satisfying every
    /// scheme hypothesis.
    pub fn harmonic() -> Self {
        Schedule {
            alpha: AlphaRule::PowerLaw {
                a: 1.0,
                c: 1.0,
                p: 1.0,
            },
            beta: BetaRule::Constant { v: 0.5 },
        }
    }

    pub fn alpha_rule(&self) -> AlphaRule {
        self.alpha
    }

    pub fn beta_rule(&self) -> BetaRule {
        self.beta
    }

    /// `α_n` for `n >= 1`.
    pub fn alpha(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        self.alpha.value(n)
    }

    /// `β_n` for `n >= 1`.
    pub fn beta(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        self.beta.value(n)
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::harmonic()
    }
}

/// Which iteration driver a schedule is being validated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    ProjectedHalpern,
    Halpern,
    Picard,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::ProjectedHalpern => "projected_halpern",
            SchemeKind::Halpern => "halpern",
            SchemeKind::Picard => "picard",
        }
    }

    /// Whether the scheme anchors toward a point `u`.
    pub fn is_anchored(self) -> bool {
        !matches!(self, SchemeKind::Picard)
    }
}

/// One hypothesis of the convergence theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleCondition {
    AlphaDivergentSum,
    AlphaVanishing,
    BetaInfPositive,
    BetaSupBelowOne,
}

impl ScheduleCondition {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleCondition::AlphaDivergentSum => "alpha_divergent_sum",
            ScheduleCondition::AlphaVanishing => "alpha_vanishing",
            ScheduleCondition::BetaInfPositive => "beta_inf_positive",
            ScheduleCondition::BetaSupBelowOne => "beta_sup_below_one",
        }
    }
}

/// Per-condition verdict for a schedule under a given scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionEntry {
    pub condition: ScheduleCondition,
    /// Whether the scheme's theorem needs this condition at all.
    pub required: bool,
    pub satisfied: bool,
    pub detail: String,
}

/// Validity report of [`validate_schedule`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleReport {
    pub scheme: SchemeKind,
    pub entries: Vec<ConditionEntry>,
}

impl ScheduleReport {
    /// True when every condition the scheme requires is satisfied.
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| !e.required || e.satisfied)
    }

    /// Names of required-but-failed conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        self.entries
            .iter()
            .filter(|e| e.required && !e.satisfied)
            .map(|e| e.condition.name())
            .collect()
    }
}

fn describe_alpha(rule: AlphaRule) -> String {
    match rule {
        AlphaRule::PowerLaw { a, c, p } => format!("alpha_n = {a}/(n+{c})^{p}"),
        AlphaRule::Constant { v } => format!("alpha_n = {v}"),
    }
}

fn describe_beta(rule: BetaRule) -> String {
    match rule {
        BetaRule::PowerLaw { a, c, p } => format!("beta_n = {a}/(n+{c})^{p}"),
        BetaRule::Constant { v } => format!("beta_n = {v}"),
    }
}

/// Judges the schedule against the hypotheses of the chosen scheme:
/// `Σ α_n = ∞` and `α_n → 0` for the anchored schemes, plus
/// `inf β_n > 0` and `sup β_n < 1` for the projected variant. Picard uses
/// no schedule, so nothing is required of it.
pub fn validate_schedule(schedule: &Schedule, scheme: SchemeKind) -> ScheduleReport {
    let alpha_required = scheme.is_anchored();
    let beta_required = scheme == SchemeKind::ProjectedHalpern;
    let alpha = schedule.alpha_rule();
    let beta = schedule.beta_rule();

    let entries = vec![
        ConditionEntry {
            condition: ScheduleCondition::AlphaDivergentSum,
            required: alpha_required,
            satisfied: alpha.divergent_sum(),
            detail: describe_alpha(alpha),
        },
        ConditionEntry {
            condition: ScheduleCondition::AlphaVanishing,
            required: alpha_required,
            satisfied: alpha.vanishing(),
            detail: describe_alpha(alpha),
        },
        ConditionEntry {
            condition: ScheduleCondition::BetaInfPositive,
            required: beta_required,
            satisfied: beta.inf_positive(),
            detail: describe_beta(beta),
        },
        ConditionEntry {
            condition: ScheduleCondition::BetaSupBelowOne,
            required: beta_required,
            satisfied: beta.sup_below_one(),
            detail: describe_beta(beta),
        },
    ];

    ScheduleReport { scheme, entries }
}
