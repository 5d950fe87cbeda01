//! TOML reading and writing for problem files.
//!
//! Parsing walks the document with a path-tracking cursor so that every
//! rejection names the offending field (`operators[1].inner.set.radius`,
//! not just "invalid file"). Serialization rebuilds the same tree; floats
//! are written in shortest round-trip form, so load ∘ serialize ∘ load is
//! the identity on problems.

use toml::map::Map;
use toml::Value;

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::{ConvexFunctional, ConvexSet, Matrix, Operator, OperatorKind};
use crate::problems::{Problem, RunSettings};
use crate::schemes::{AlphaRule, BetaRule, Schedule, SchemeKind};

pub(super) fn parse(text: &str) -> Result<Problem> {
    let root: Value = text
        .parse()
        .map_err(|e: toml::de::Error| Error::problem("<document>", e.message()))?;
    let cur = Cursor {
        value: &root,
        path: String::new(),
    };
    cur.deny_unknown(&[
        "dim",
        "scheme",
        "anchor",
        "initial",
        "known_solution",
        "domain",
        "operators",
        "schedule",
        "run",
    ])?;

    let dim = cur.require("dim")?.as_usize()?;
    if dim == 0 {
        return Err(Error::problem("dim", "must be a positive integer"));
    }
    let scheme = parse_scheme(&cur.require("scheme")?)?;
    let anchor = cur.get("anchor").map(|c| c.as_vector()).transpose()?;
    let known_solution = cur
        .get("known_solution")
        .map(|c| c.as_vector())
        .transpose()?;
    let initial = match cur.get("initial") {
        Some(c) => c.as_vector()?,
        None => Vector::zeros(dim)?,
    };
    let domain = cur.get("domain").map(|c| parse_set(&c)).transpose()?;

    let operators_cur = cur.require("operators")?;
    let mut operators = Vec::new();
    for c in operators_cur.as_array()? {
        operators.push(parse_operator(&c)?);
    }
    if operators.is_empty() {
        return Err(Error::problem("operators", "must not be empty"));
    }

    let schedule = match cur.get("schedule") {
        Some(c) => parse_schedule(&c)?,
        None => Schedule::harmonic(),
    };
    let run = match cur.get("run") {
        Some(c) => parse_run(&c)?,
        None => RunSettings::default(),
    };

    Ok(Problem {
        dim,
        scheme,
        operators,
        domain,
        anchor,
        schedule,
        initial,
        run,
        known_solution,
    })
}

fn parse_scheme(cur: &Cursor) -> Result<SchemeKind> {
    match cur.as_str()? {
        "projected_halpern" => Ok(SchemeKind::ProjectedHalpern),
        "halpern" => Ok(SchemeKind::Halpern),
        "picard" => Ok(SchemeKind::Picard),
        other => Err(cur.reject(format!(
            "unknown scheme {other:?}; expected projected_halpern, halpern, or picard"
        ))),
    }
}

fn parse_set(cur: &Cursor) -> Result<ConvexSet> {
    let kind = cur.require("kind")?;
    let built = match kind.as_str()? {
        "halfspace" => {
            cur.deny_unknown(&["kind", "normal", "offset"])?;
            ConvexSet::halfspace(
                cur.require("normal")?.as_vector()?,
                cur.require("offset")?.as_f64()?,
            )
        }
        "hyperplane" => {
            cur.deny_unknown(&["kind", "normal", "offset"])?;
            ConvexSet::hyperplane(
                cur.require("normal")?.as_vector()?,
                cur.require("offset")?.as_f64()?,
            )
        }
        "ball" => {
            cur.deny_unknown(&["kind", "center", "radius"])?;
            ConvexSet::ball(
                cur.require("center")?.as_vector()?,
                cur.require("radius")?.as_f64()?,
            )
        }
        "box" => {
            cur.deny_unknown(&["kind", "lo", "hi"])?;
            ConvexSet::boxed(
                cur.require("lo")?.as_vector()?,
                cur.require("hi")?.as_vector()?,
            )
        }
        "intersection" => {
            cur.deny_unknown(&["kind", "members"])?;
            let members = cur
                .require("members")?
                .as_array()?
                .iter()
                .map(parse_set)
                .collect::<Result<Vec<_>>>()?;
            ConvexSet::intersection(members)
        }
        other => {
            return Err(kind.reject(format!(
                "unknown set kind {other:?}; expected halfspace, hyperplane, ball, box, \
                 or intersection"
            )))
        }
    };
    built.map_err(|e| cur.wrap(e))
}

fn parse_functional(cur: &Cursor) -> Result<ConvexFunctional> {
    let kind = cur.require("kind")?;
    let built = match kind.as_str()? {
        "quadratic" => {
            cur.deny_unknown(&["kind", "matrix", "linear", "constant"])?;
            let matrix = parse_matrix(&cur.require("matrix")?)?;
            ConvexFunctional::quadratic(
                matrix,
                cur.require("linear")?.as_vector()?,
                cur.require("constant")?.as_f64()?,
            )
        }
        "max_affine" => {
            cur.deny_unknown(&["kind", "pieces"])?;
            let pieces = cur
                .require("pieces")?
                .as_array()?
                .iter()
                .map(|piece| {
                    piece.deny_unknown(&["normal", "offset"])?;
                    Ok((
                        piece.require("normal")?.as_vector()?,
                        piece.require("offset")?.as_f64()?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            ConvexFunctional::max_affine(pieces)
        }
        other => {
            return Err(kind.reject(format!(
                "unknown functional kind {other:?}; expected quadratic or max_affine"
            )))
        }
    };
    built.map_err(|e| cur.wrap(e))
}

fn parse_matrix(cur: &Cursor) -> Result<Matrix> {
    let rows = cur
        .as_array()?
        .iter()
        .map(|row| row.as_vec_f64())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| cur.wrap(e))
}

fn parse_operator(cur: &Cursor) -> Result<Operator> {
    let ty = cur.require("type")?;
    let built = match ty.as_str()? {
        "projection" => {
            cur.deny_unknown(&["type", "set"])?;
            Operator::metric_projection(parse_set(&cur.require("set")?)?)
        }
        "subgradient_projection" => {
            cur.deny_unknown(&["type", "functional"])?;
            Operator::subgradient_projection(parse_functional(&cur.require("functional")?)?)
        }
        "relaxed" => {
            cur.deny_unknown(&["type", "lambda", "inner"])?;
            let lambda = cur.require("lambda")?.as_f64()?;
            let inner = parse_operator(&cur.require("inner")?)?;
            Operator::relaxed(inner, lambda)
        }
        "composed" => {
            cur.deny_unknown(&["type", "domain", "inner"])?;
            let domain = parse_set(&cur.require("domain")?)?;
            let inner = parse_operator(&cur.require("inner")?)?;
            Operator::composed_with_projection(inner, domain)
        }
        "affine" => {
            cur.deny_unknown(&["type", "matrix", "translation"])?;
            let matrix = parse_matrix(&cur.require("matrix")?)?;
            Operator::affine(matrix, cur.require("translation")?.as_vector()?)
        }
        other => {
            return Err(ty.reject(format!(
                "unknown operator type {other:?}; expected projection, \
                 subgradient_projection, relaxed, composed, or affine"
            )))
        }
    };
    built.map_err(|e| cur.wrap(e))
}

fn parse_schedule(cur: &Cursor) -> Result<Schedule> {
    cur.deny_unknown(&["alpha", "beta"])?;
    let alpha = match cur.get("alpha") {
        Some(c) => parse_alpha(&c)?,
        None => Schedule::harmonic().alpha_rule(),
    };
    let beta = match cur.get("beta") {
        Some(c) => parse_beta(&c)?,
        None => Schedule::harmonic().beta_rule(),
    };
    Schedule::new(alpha, beta).map_err(|e| cur.wrap(e))
}

fn parse_alpha(cur: &Cursor) -> Result<AlphaRule> {
    let family = cur.require("family")?;
    match family.as_str()? {
        "power" => {
            cur.deny_unknown(&["family", "a", "c", "p"])?;
            Ok(AlphaRule::PowerLaw {
                a: cur.require("a")?.as_f64()?,
                c: cur.require("c")?.as_f64()?,
                p: cur.require("p")?.as_f64()?,
            })
        }
        "constant" => {
            cur.deny_unknown(&["family", "v"])?;
            Ok(AlphaRule::Constant {
                v: cur.require("v")?.as_f64()?,
            })
        }
        other => Err(family.reject(format!(
            "unknown alpha family {other:?}; expected power or constant"
        ))),
    }
}

fn parse_beta(cur: &Cursor) -> Result<BetaRule> {
    // the canonical beta form is `{ constant = v }`; a power family is
    // accepted with the same fields as alpha
    if let Some(v) = cur.get("constant") {
        cur.deny_unknown(&["constant"])?;
        return Ok(BetaRule::Constant { v: v.as_f64()? });
    }
    let family = cur.require("family")?;
    match family.as_str()? {
        "power" => {
            cur.deny_unknown(&["family", "a", "c", "p"])?;
            Ok(BetaRule::PowerLaw {
                a: cur.require("a")?.as_f64()?,
                c: cur.require("c")?.as_f64()?,
                p: cur.require("p")?.as_f64()?,
            })
        }
        other => Err(family.reject(format!(
            "unknown beta family {other:?}; expected power, or use {{ constant = v }}"
        ))),
    }
}

fn parse_run(cur: &Cursor) -> Result<RunSettings> {
    cur.deny_unknown(&["max_iters", "residual_tol", "trace_every"])?;
    let defaults = RunSettings::default();
    Ok(RunSettings {
        max_iters: match cur.get("max_iters") {
            Some(c) => c.as_usize()?,
            None => defaults.max_iters,
        },
        residual_tol: match cur.get("residual_tol") {
            Some(c) => c.as_f64()?,
            None => defaults.residual_tol,
        },
        trace_every: match cur.get("trace_every") {
            Some(c) => c.as_usize()?,
            None => defaults.trace_every,
        },
    })
}

/// A value plus the path that leads to it, for error reporting.
struct Cursor<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> Cursor<'a> {
    fn child(&self, key: &str, value: &'a Value) -> Cursor<'a> {
        let path = if self.path.is_empty() {
            key.to_owned()
        } else {
            format!("{}.{key}", self.path)
        };
        Cursor { value, path }
    }

    fn reject(&self, reason: impl Into<String>) -> Error {
        Error::problem(self.path.clone(), reason)
    }

    /// Re-roots a construction error at this cursor's path.
    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::Construction { reason, .. } => self.reject(reason),
            Error::DimensionMismatch { expected, got } => {
                self.reject(format!("dimension mismatch: expected {expected}, got {got}"))
            }
            Error::NonFinite { index } => {
                self.reject(format!("non-finite value at coordinate {index}"))
            }
            Error::NotDirectlyProjectable => self.reject(
                "intersection sets are not directly projectable here; list the members \
                 as separate operators instead",
            ),
            other => other,
        }
    }

    fn as_table(&self) -> Result<&'a Map<String, Value>> {
        self.value
            .as_table()
            .ok_or_else(|| self.reject("expected a table"))
    }

    fn get(&self, key: &str) -> Option<Cursor<'a>> {
        self.value
            .as_table()
            .and_then(|t| t.get(key))
            .map(|v| self.child(key, v))
    }

    fn require(&self, key: &str) -> Result<Cursor<'a>> {
        let table = self.as_table()?;
        match table.get(key) {
            Some(v) => Ok(self.child(key, v)),
            None => Err(self.reject(format!("missing required field `{key}`"))),
        }
    }

    fn deny_unknown(&self, allowed: &[&str]) -> Result<()> {
        for key in self.as_table()?.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(self.child(key, self.value).reject(format!(
                    "unknown field; allowed fields are {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn as_str(&self) -> Result<&'a str> {
        self.value
            .as_str()
            .ok_or_else(|| self.reject("expected a string"))
    }

    fn as_f64(&self) -> Result<f64> {
        match self.value {
            Value::Float(f) => Ok(*f),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(self.reject("expected a number")),
        }
    }

    fn as_usize(&self) -> Result<usize> {
        match self.value {
            Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            _ => Err(self.reject("expected a nonnegative integer")),
        }
    }

    fn as_array(&self) -> Result<Vec<Cursor<'a>>> {
        let items = self
            .value
            .as_array()
            .ok_or_else(|| self.reject("expected an array"))?;
        Ok(items
            .iter()
            .enumerate()
            .map(|(i, v)| Cursor {
                value: v,
                path: format!("{}[{i}]", self.path),
            })
            .collect())
    }

    fn as_vec_f64(&self) -> Result<Vec<f64>> {
        self.as_array()?.iter().map(|c| c.as_f64()).collect()
    }

    fn as_vector(&self) -> Result<Vector> {
        Vector::new(self.as_vec_f64()?).map_err(|e| self.wrap(e))
    }
}

pub(super) fn serialize(problem: &Problem) -> String {
    let mut root = Map::new();
    root.insert("dim".into(), Value::Integer(problem.dim as i64));
    root.insert("scheme".into(), Value::String(problem.scheme.name().into()));
    if let Some(anchor) = &problem.anchor {
        root.insert("anchor".into(), vector_value(anchor));
    }
    root.insert("initial".into(), vector_value(&problem.initial));
    if let Some(known) = &problem.known_solution {
        root.insert("known_solution".into(), vector_value(known));
    }
    if let Some(domain) = &problem.domain {
        root.insert("domain".into(), set_value(domain));
    }
    root.insert(
        "operators".into(),
        Value::Array(problem.operators.iter().map(operator_value).collect()),
    );
    root.insert("schedule".into(), schedule_value(&problem.schedule));
    root.insert("run".into(), run_value(&problem.run));

    toml::to_string_pretty(&Value::Table(root)).expect("problem trees always serialize")
}

fn vector_value(v: &Vector) -> Value {
    Value::Array(v.coords().iter().map(|&c| Value::Float(c)).collect())
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(
        m.rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(Value::Float).collect()))
            .collect(),
    )
}

fn set_value(set: &ConvexSet) -> Value {
    let mut t = Map::new();
    match set {
        ConvexSet::Halfspace { normal, offset } => {
            t.insert("kind".into(), Value::String("halfspace".into()));
            t.insert("normal".into(), vector_value(normal));
            t.insert("offset".into(), Value::Float(*offset));
        }
        ConvexSet::Hyperplane { normal, offset } => {
            t.insert("kind".into(), Value::String("hyperplane".into()));
            t.insert("normal".into(), vector_value(normal));
            t.insert("offset".into(), Value::Float(*offset));
        }
        ConvexSet::Ball { center, radius } => {
            t.insert("kind".into(), Value::String("ball".into()));
            t.insert("center".into(), vector_value(center));
            t.insert("radius".into(), Value::Float(*radius));
        }
        ConvexSet::Box { lo, hi } => {
            t.insert("kind".into(), Value::String("box".into()));
            t.insert("lo".into(), vector_value(lo));
            t.insert("hi".into(), vector_value(hi));
        }
        ConvexSet::Intersection(members) => {
            t.insert("kind".into(), Value::String("intersection".into()));
            t.insert(
                "members".into(),
                Value::Array(members.iter().map(set_value).collect()),
            );
        }
    }
    Value::Table(t)
}

fn functional_value(f: &ConvexFunctional) -> Value {
    let mut t = Map::new();
    match f {
        ConvexFunctional::Quadratic {
            q_matrix,
            linear,
            constant,
        } => {
            t.insert("kind".into(), Value::String("quadratic".into()));
            t.insert("matrix".into(), matrix_value(q_matrix));
            t.insert("linear".into(), vector_value(linear));
            t.insert("constant".into(), Value::Float(*constant));
        }
        ConvexFunctional::MaxAffine { pieces } => {
            t.insert("kind".into(), Value::String("max_affine".into()));
            t.insert(
                "pieces".into(),
                Value::Array(
                    pieces
                        .iter()
                        .map(|(a, b)| {
                            let mut piece = Map::new();
                            piece.insert("normal".into(), vector_value(a));
                            piece.insert("offset".into(), Value::Float(*b));
                            Value::Table(piece)
                        })
                        .collect(),
                ),
            );
        }
    }
    Value::Table(t)
}

fn operator_value(op: &Operator) -> Value {
    let mut t = Map::new();
    match op.kind() {
        OperatorKind::MetricProjection(set) => {
            t.insert("type".into(), Value::String("projection".into()));
            t.insert("set".into(), set_value(set));
        }
        OperatorKind::SubgradientProjection(f) => {
            t.insert("type".into(), Value::String("subgradient_projection".into()));
            t.insert("functional".into(), functional_value(f));
        }
        OperatorKind::Relaxed { inner, lambda } => {
            t.insert("type".into(), Value::String("relaxed".into()));
            t.insert("lambda".into(), Value::Float(*lambda));
            t.insert("inner".into(), operator_value(inner));
        }
        OperatorKind::ComposedWithProjection { inner, domain } => {
            t.insert("type".into(), Value::String("composed".into()));
            t.insert("domain".into(), set_value(domain));
            t.insert("inner".into(), operator_value(inner));
        }
        OperatorKind::Affine {
            matrix,
            translation,
        } => {
            t.insert("type".into(), Value::String("affine".into()));
            t.insert("matrix".into(), matrix_value(matrix));
            t.insert("translation".into(), vector_value(translation));
        }
    }
    Value::Table(t)
}

fn schedule_value(schedule: &Schedule) -> Value {
    let mut alpha = Map::new();
    match schedule.alpha_rule() {
        AlphaRule::PowerLaw { a, c, p } => {
            alpha.insert("family".into(), Value::String("power".into()));
            alpha.insert("a".into(), Value::Float(a));
            alpha.insert("c".into(), Value::Float(c));
            alpha.insert("p".into(), Value::Float(p));
        }
        AlphaRule::Constant { v } => {
            alpha.insert("family".into(), Value::String("constant".into()));
            alpha.insert("v".into(), Value::Float(v));
        }
    }
    let mut beta = Map::new();
    match schedule.beta_rule() {
        BetaRule::Constant { v } => {
            beta.insert("constant".into(), Value::Float(v));
        }
        BetaRule::PowerLaw { a, c, p } => {
            beta.insert("family".into(), Value::String("power".into()));
            beta.insert("a".into(), Value::Float(a));
            beta.insert("c".into(), Value::Float(c));
            beta.insert("p".into(), Value::Float(p));
        }
    }
    let mut t = Map::new();
    t.insert("alpha".into(), Value::Table(alpha));
    t.insert("beta".into(), Value::Table(beta));
    Value::Table(t)
}

fn run_value(run: &RunSettings) -> Value {
    let mut t = Map::new();
    t.insert("max_iters".into(), Value::Integer(run.max_iters as i64));
    t.insert("residual_tol".into(), Value::Float(run.residual_tol));
    t.insert("trace_every".into(), Value::Integer(run.trace_every as i64));
    Value::Table(t)
}
