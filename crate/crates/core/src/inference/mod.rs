//! Interval propagation of vanishing, positivity and Euler-characteristic
//! rules over declared manifold descriptions.
//!
//! Every norm slot is an interval `[lo, hi] ⊆ [0, ∞]`. Rules only narrow.
//! After the value fixpoint is reached, each non-trivial endpoint gets the
//! shallowest justification among the rule applications that produce it
//! exactly, so the reported provenance does not depend on rule order.

mod derive;
mod description;
mod engine;
mod gromov;
mod interval;
mod rules;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use derive::Construction;
pub(crate) use description::yes;
pub use description::{BoundaryRef, Description, Fibration, Origin, Port};
pub use gromov::{GromovReport, GromovStatus};
pub use interval::{Interval, Lower};
pub use rules::catalog;

use crate::certificates::{verify, Certificate, Ledger, NormKind, Verdict};
use crate::homology::homology;
use crate::manifold::ManifoldComplex;
use crate::rational;
use engine::{Conclusion, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("duplicate manifold name `{0}`")]
    Duplicate(String),
    #[error("unknown manifold `{0}`")]
    Unknown(String),
    #[error("`{manifold}`: boundary component `{component}` has dimension {found}, expected {expected}")]
    BoundaryDimension {
        manifold: String,
        component: String,
        found: usize,
        expected: usize,
    },
    #[error("invalid description `{0}`: {1}")]
    Invalid(String, String),
    #[error("inconsistency at {fact}\n  held:    {existing}\n  derived: {incoming}")]
    Inconsistent {
        fact: String,
        existing: String,
        incoming: String,
    },
    #[error("propagate() has not run since the last change")]
    NotPropagated,
    #[error("{0}")]
    Mismatch(String),
    #[error("`{0}` lacks required flags: {1}")]
    MissingFlags(String, String),
    #[error("no fillings declared")]
    NoFillings,
    #[error("no fixpoint after {0} passes")]
    NoFixpoint(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Handle(pub usize);

/// The three norm slots. On a manifold with boundary they hold the
/// relative norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    Sv,
    Isv,
    Sisv,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::Sv, Norm::Isv, Norm::Sisv];

    fn index(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        match self {
            Norm::Sv => "sv",
            Norm::Isv => "isv",
            Norm::Sisv => "sisv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Lo(Norm),
    Hi(Norm),
    Chi,
    ChiRel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub manifold: usize,
    pub quantity: Quantity,
}

/// Queryable invariants. The `_rel` forms are the relative norms; on a
/// closed manifold they coincide with the absolute ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Sv,
    SvRel,
    Isv,
    IsvRel,
    Sisv,
    SisvRel,
    Chi,
    ChiRel,
}

impl Invariant {
    pub const ALL: [Invariant; 8] = [
        Invariant::Sv,
        Invariant::SvRel,
        Invariant::Isv,
        Invariant::IsvRel,
        Invariant::Sisv,
        Invariant::SisvRel,
        Invariant::Chi,
        Invariant::ChiRel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::Sv => "sv",
            Invariant::SvRel => "sv_rel",
            Invariant::Isv => "isv",
            Invariant::IsvRel => "isv_rel",
            Invariant::Sisv => "sisv",
            Invariant::SisvRel => "sisv_rel",
            Invariant::Chi => "chi",
            Invariant::ChiRel => "chi_rel",
        }
    }

    pub fn norm(self) -> Option<(Norm, bool)> {
        match self {
            Invariant::Sv => Some((Norm::Sv, false)),
            Invariant::SvRel => Some((Norm::Sv, true)),
            Invariant::Isv => Some((Norm::Isv, false)),
            Invariant::IsvRel => Some((Norm::Isv, true)),
            Invariant::Sisv => Some((Norm::Sisv, false)),
            Invariant::SisvRel => Some((Norm::Sisv, true)),
            Invariant::Chi | Invariant::ChiRel => None,
        }
    }
}

impl FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Invariant::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| format!("unknown invariant `{s}`"))
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-manifold values after propagation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State {
    pub norms: [Interval; 3],
    pub chi: Option<i64>,
    pub chi_rel: Option<i64>,
    pub betti: Option<Vec<u64>>,
}

impl State {
    pub fn norm(&self, n: Norm) -> &Interval {
        &self.norms[n.index()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Justification {
    pub rule: String,
    pub statement: String,
    pub inputs: Vec<Fact>,
    pub depth: usize,
}

/// Fixpoint values and the chosen justification of every non-trivial fact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub states: Vec<State>,
    pub why: BTreeMap<Fact, Justification>,
}

/// One step of a derivation, with the steps it used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProvenanceNode {
    pub fact: String,
    pub rule: String,
    pub statement: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<ProvenanceNode>,
}

impl ProvenanceNode {
    /// Indented text, one fact per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}  [{}] {}\n", self.fact, self.rule, self.statement));
        for i in &self.inputs {
            i.render_into(depth + 1, out);
        }
    }

    /// Rule ids used anywhere in the derivation, depth first.
    pub fn rules(&self) -> Vec<&str> {
        let mut out = vec![self.rule.as_str()];
        for i in &self.inputs {
            out.extend(i.rules());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "value")]
pub enum Answer {
    Interval(Interval),
    Integer(Option<i64>),
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Interval(i) => write!(f, "{i}"),
            Answer::Integer(Some(x)) => write!(f, "{x}"),
            Answer::Integer(None) => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub manifold: String,
    pub invariant: Invariant,
    pub answer: Answer,
    pub provenance: Vec<ProvenanceNode>,
}

/// One row of the fixpoint table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub name: String,
    pub dim: usize,
    pub relative: bool,
    pub chi: Option<i64>,
    pub chi_rel: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<u64>>,
    pub sv: Interval,
    pub isv: Interval,
    pub sisv: Interval,
}

#[derive(Clone, Debug)]
pub(crate) enum Link {
    Double(usize),
    ConnectedSum(usize, usize),
    Product(Vec<usize>),
    Glue {
        pieces: Vec<usize>,
        pairs: Vec<(Port, Port)>,
    },
    Cover {
        base: usize,
        degree: u64,
    },
    Reversed(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub boundary: Vec<usize>,
    pub link: Option<Link>,
    pub fibre: Option<(usize, usize)>,
    /// `(M, N)` when this is the boundary of `M × N` with both factors bounded.
    pub boundary_of_product: Option<(usize, usize)>,
}

/// Only complexes this small get their Betti numbers computed on
/// registration; the Euler characteristic is always counted.
const BETTI_SIMPLEX_LIMIT: usize = 4000;

/// Manifold descriptions, their base facts and the last fixpoint.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    descs: Vec<Description>,
    nodes: Vec<Node>,
    index: BTreeMap<String, usize>,
    base: Vec<Conclusion>,
    betti: Vec<Option<Vec<u64>>>,
    tables: Option<Tables>,
}

impl Registry {
    pub fn new() -> Registry {
        Registry::default()
    }

    pub fn len(&self) -> usize {
        self.descs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descs.is_empty()
    }

    pub fn handle(&self, name: &str) -> Result<Handle, InferenceError> {
        self.index
            .get(name)
            .map(|&i| Handle(i))
            .ok_or_else(|| InferenceError::Unknown(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn description(&self, h: Handle) -> &Description {
        &self.descs[h.0]
    }

    pub fn descriptions(&self) -> &[Description] {
        &self.descs
    }

    pub fn boundary(&self, h: Handle) -> Vec<Handle> {
        self.nodes[h.0].boundary.iter().map(|&i| Handle(i)).collect()
    }

    pub(crate) fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn tables(&self) -> Option<&Tables> {
        self.tables.as_ref()
    }

    /// Registers a description. Declared χ values become base facts.
    pub fn add_manifold(&mut self, d: Description) -> Result<Handle, InferenceError> {
        let (d, node) = self.validate(d)?;
        let i = self.descs.len();
        if let Some(x) = d.chi {
            self.base.push(Conclusion::base(
                i,
                Quantity::Chi,
                Value::Int(x),
                "declared",
                "declared χ(M)",
            ));
        }
        if let Some(x) = d.chi_rel {
            self.base.push(Conclusion::base(
                i,
                Quantity::ChiRel,
                Value::Int(x),
                "declared",
                "declared χ(M,∂M)",
            ));
        }
        self.index.insert(d.name.clone(), i);
        self.descs.push(d);
        self.nodes.push(node);
        self.betti.push(None);
        self.tables = None;
        Ok(Handle(i))
    }

    /// Registers a description with an attached triangulation. Unset
    /// orientation, connectivity and closedness are read off the
    /// triangulation; boundary components are registered as `∂name[i]`
    /// unless the description lists them.
    pub fn add_triangulated(&mut self, mut d: Description, m: &ManifoldComplex) -> Result<Handle, InferenceError> {
        let fail = |msg: String| InferenceError::Invalid(d.name.clone(), msg);
        if d.dim != m.dim() {
            return Err(fail(format!(
                "dimension {} but triangulation has dimension {}",
                d.dim,
                m.dim()
            )));
        }
        let closed = m.is_closed();
        match d.closed {
            Some(c) if c != closed => return Err(fail(format!("declared closed = {c} contradicts the triangulation"))),
            _ => d.closed = Some(closed),
        }
        let connected = m.is_connected();
        match d.connected {
            Some(c) if c != connected => {
                return Err(fail(format!("declared connected = {c} contradicts the triangulation")))
            }
            _ => d.connected = Some(connected),
        }
        if d.oriented == Some(false) {
            return Err(fail("oriented = false but the triangulation is oriented".into()));
        }
        d.oriented = Some(true);
        let parts = m.boundary_components();
        if d.boundary.is_empty() {
            for (k, b) in parts.iter().enumerate() {
                let name = format!("∂{}[{k}]", d.name);
                let bd = Description {
                    closed: Some(true),
                    ..Description::new(name.clone(), b.dim())
                };
                self.add_triangulated(bd, b)?;
                d.boundary.push(BoundaryRef::new(name));
            }
        } else if d.boundary.len() != parts.len() {
            return Err(fail(format!(
                "{} boundary components declared, triangulation has {}",
                d.boundary.len(),
                parts.len()
            )));
        }
        let chi = m.euler_characteristic();
        let chi_rel = m.relative_euler_characteristic();
        let simplices: usize = (0..=m.dim()).map(|k| m.complex().count(k)).sum();
        let betti = (simplices <= BETTI_SIMPLEX_LIMIT)
            .then(|| homology(m.complex(), None).ok().map(|h| h.betti))
            .flatten();
        let h = self.add_manifold(d)?;
        let note = "counted on the attached triangulation";
        self.base.push(Conclusion::base(
            h.0,
            Quantity::Chi,
            Value::Int(chi),
            "triangulation",
            note,
        ));
        self.base.push(Conclusion::base(
            h.0,
            Quantity::ChiRel,
            Value::Int(chi_rel),
            "triangulation",
            note,
        ));
        self.betti[h.0] = betti;
        Ok(h)
    }

    /// Imports a verified certificate as an upper endpoint.
    pub fn import_certificate(&mut self, cert: &Certificate) -> Result<(), InferenceError> {
        let h = self.handle(&cert.target.manifold)?;
        let closed = self.descs[h.0].closed;
        let kind = cert.target.kind;
        let fits = match kind {
            NormKind::RelativeReal | NormKind::RelativeIntegral => closed == Some(false),
            NormKind::Real | NormKind::Integral => closed == Some(true),
            NormKind::StableIntegral => closed.is_some(),
        };
        if !fits {
            return Err(InferenceError::Mismatch(format!(
                "{kind} certificate does not match `{}`",
                cert.target.manifold
            )));
        }
        if let Verdict::Fail(reason) = verify(cert) {
            return Err(InferenceError::Mismatch(format!("certificate rejected: {reason}")));
        }
        let norm = match kind {
            NormKind::Real | NormKind::RelativeReal => Norm::Sv,
            NormKind::Integral | NormKind::RelativeIntegral => Norm::Isv,
            NormKind::StableIntegral => Norm::Sisv,
        };
        let statement = format!(
            "verified {} certificate ({} witness)",
            kind.symbol(),
            witness_name(cert)
        );
        self.base.push(Conclusion {
            target: Fact {
                manifold: h.0,
                quantity: Quantity::Hi(norm),
            },
            value: Value::Upper(cert.bound.clone()),
            inputs: vec![],
            rule: "certificate".into(),
            statement: statement.into(),
        });
        self.tables = None;
        Ok(())
    }

    /// Imports every ledger entry whose target is registered; returns how
    /// many were imported.
    pub fn import_ledger(&mut self, ledger: &Ledger) -> Result<usize, InferenceError> {
        let mut n = 0;
        for c in ledger.certificates() {
            if self.contains(&c.target.manifold) {
                self.import_certificate(c)?;
                n += 1;
            }
        }
        Ok(n)
    }

    /// Runs every rule to quiescence.
    pub fn propagate(&mut self) -> Result<&Tables, InferenceError> {
        let order: Vec<usize> = (0..self.job_count()).collect();
        self.propagate_with_order(&order)
    }

    /// Number of (rule, manifold) jobs per pass.
    pub fn job_count(&self) -> usize {
        rules::RULES.len() * self.descs.len()
    }

    /// Propagation with the jobs of each pass visited in `order`, a
    /// permutation of `0..job_count()`.
    pub fn propagate_with_order(&mut self, order: &[usize]) -> Result<&Tables, InferenceError> {
        let mut seen = vec![false; self.job_count()];
        for &j in order {
            if j >= seen.len() || std::mem::replace(&mut seen[j], true) {
                return Err(InferenceError::Mismatch("job order is not a permutation".into()));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(InferenceError::Mismatch("job order is not a permutation".into()));
        }
        self.tables = None;
        let t = engine::run(self, order)?;
        Ok(self.tables.insert(t))
    }

    fn fixpoint(&self) -> Result<&Tables, InferenceError> {
        self.tables.as_ref().ok_or(InferenceError::NotPropagated)
    }

    pub fn state(&self, h: Handle) -> Result<&State, InferenceError> {
        Ok(&self.fixpoint()?.states[h.0])
    }

    pub fn interval(&self, h: Handle, n: Norm) -> Result<&Interval, InferenceError> {
        Ok(self.state(h)?.norm(n))
    }

    pub fn is_closed(&self, h: Handle) -> Option<bool> {
        self.descs[h.0].closed
    }

    pub fn query(&self, name: &str, inv: Invariant) -> Result<QueryResult, InferenceError> {
        let h = self.handle(name)?;
        let t = self.fixpoint()?;
        let s = &t.states[h.0];
        let fact = |quantity| Fact {
            manifold: h.0,
            quantity,
        };
        let (answer, facts) = match inv.norm() {
            Some((n, relative)) => {
                if !relative && self.descs[h.0].closed != Some(true) {
                    return Err(InferenceError::Mismatch(format!(
                        "`{name}` is not known to be closed; ask for {}_rel",
                        n.name()
                    )));
                }
                let q = [fact(Quantity::Lo(n)), fact(Quantity::Hi(n))];
                (Answer::Interval(s.norm(n).clone()), q.to_vec())
            }
            None => {
                let (v, q) = match inv {
                    Invariant::Chi => (s.chi, Quantity::Chi),
                    _ => (s.chi_rel, Quantity::ChiRel),
                };
                (Answer::Integer(v), vec![fact(q)])
            }
        };
        let provenance = facts.into_iter().filter_map(|f| self.explain_fact(f).ok()).collect();
        Ok(QueryResult {
            manifold: name.to_string(),
            invariant: inv,
            answer,
            provenance,
        })
    }

    /// Derivation tree of a non-trivial fact.
    pub fn explain_fact(&self, f: Fact) -> Result<ProvenanceNode, InferenceError> {
        let t = self.fixpoint()?;
        let j = t
            .why
            .get(&f)
            .ok_or_else(|| InferenceError::Mismatch(format!("{} has no derivation", self.fact_name(f))))?;
        let inputs = j.inputs.iter().filter_map(|&g| self.explain_fact(g).ok()).collect();
        Ok(ProvenanceNode {
            fact: self.fact_label(f, &t.states[f.manifold]),
            rule: j.rule.clone(),
            statement: j.statement.clone(),
            inputs,
        })
    }

    pub fn table(&self) -> Result<Vec<Row>, InferenceError> {
        let t = self.fixpoint()?;
        Ok(self
            .descs
            .iter()
            .zip(&t.states)
            .map(|(d, s)| Row {
                name: d.name.clone(),
                dim: d.dim,
                relative: d.closed != Some(true),
                chi: s.chi,
                chi_rel: s.chi_rel,
                betti: s.betti.clone(),
                sv: s.norms[0].clone(),
                isv: s.norms[1].clone(),
                sisv: s.norms[2].clone(),
            })
            .collect())
    }

    pub(crate) fn fact_name(&self, f: Fact) -> String {
        let name = &self.descs[f.manifold].name;
        let rel = if self.descs[f.manifold].closed == Some(true) {
            ""
        } else {
            "_rel"
        };
        match f.quantity {
            Quantity::Lo(n) | Quantity::Hi(n) => format!("{}{rel}({name})", n.name()),
            Quantity::Chi => format!("chi({name})"),
            Quantity::ChiRel => format!("chi_rel({name})"),
        }
    }

    pub(crate) fn fact_label(&self, f: Fact, s: &State) -> String {
        let name = self.fact_name(f);
        match f.quantity {
            Quantity::Lo(n) => {
                let lo = &s.norm(n).lo;
                if lo.strict {
                    format!("{name} > 0")
                } else {
                    format!("{name} ≥ {}", rational::display(&lo.value))
                }
            }
            Quantity::Hi(n) => match &s.norm(n).hi {
                Some(h) => format!("{name} ≤ {}", rational::display(h)),
                None => format!("{name} ≤ ∞"),
            },
            Quantity::Chi => format!("{name} = {}", fmt_opt(s.chi)),
            Quantity::ChiRel => format!("{name} = {}", fmt_opt(s.chi_rel)),
        }
    }

    fn validate(&self, mut d: Description) -> Result<(Description, Node), InferenceError> {
        let name = d.name.clone();
        let invalid = |msg: &str| InferenceError::Invalid(name.clone(), msg.to_string());
        if name.trim().is_empty() {
            return Err(invalid("empty name"));
        }
        if self.index.contains_key(&name) {
            return Err(InferenceError::Duplicate(name));
        }
        let lookup = |n: &str| {
            self.index
                .get(n)
                .copied()
                .ok_or_else(|| InferenceError::Unknown(n.to_string()))
        };
        let mut boundary = Vec::with_capacity(d.boundary.len());
        for b in &d.boundary {
            let i = lookup(&b.manifold)?;
            let bd = &self.descs[i];
            if d.dim == 0 || bd.dim + 1 != d.dim {
                return Err(InferenceError::BoundaryDimension {
                    manifold: name.clone(),
                    component: b.manifold.clone(),
                    found: bd.dim,
                    expected: d.dim.saturating_sub(1),
                });
            }
            if bd.closed == Some(false) {
                return Err(invalid(&format!("boundary component `{}` is not closed", b.manifold)));
            }
            boundary.push(i);
        }
        if !boundary.is_empty() {
            if d.closed == Some(true) {
                return Err(invalid("closed but boundary components listed"));
            }
            d.closed = Some(false);
        }
        if let Some(s) = d.signature {
            if !d.dim.is_multiple_of(4) {
                return Err(invalid("signature needs a dimension divisible by 4"));
            }
            if let Some(c) = d.chi {
                if (c - s).rem_euclid(2) != 0 {
                    return Err(invalid("χ and σ have different parity"));
                }
            }
        }
        if let (Some(true), Some(a), Some(b)) = (d.closed, d.chi, d.chi_rel) {
            if a != b {
                return Err(invalid("closed, but χ ≠ χ(M,∂M)"));
            }
        }
        let fibre = match &d.fibre {
            Some(f) => {
                let (fi, bi) = (lookup(&f.fiber)?, lookup(&f.base)?);
                if self.descs[fi].dim + self.descs[bi].dim != d.dim {
                    return Err(invalid("fibre and base dimensions do not add up"));
                }
                Some((fi, bi))
            }
            None => None,
        };
        let link = match &d.origin {
            None => None,
            Some(o) => Some(self.resolve_origin(&d, o, &lookup)?),
        };
        Ok((
            d,
            Node {
                boundary,
                link,
                fibre,
                boundary_of_product: None,
            },
        ))
    }

    fn resolve_origin(
        &self,
        d: &Description,
        o: &Origin,
        lookup: &dyn Fn(&str) -> Result<usize, InferenceError>,
    ) -> Result<Link, InferenceError> {
        let invalid = |msg: String| InferenceError::Invalid(d.name.clone(), msg);
        let same_dim = |i: usize| {
            if self.descs[i].dim == d.dim {
                Ok(i)
            } else {
                Err(invalid(format!(
                    "`{}` has dimension {}",
                    self.descs[i].name, self.descs[i].dim
                )))
            }
        };
        Ok(match o {
            Origin::Double { of } => {
                let m = same_dim(lookup(of)?)?;
                if self.descs[m].closed == Some(true) {
                    return Err(invalid(format!("`{of}` is closed; doubles need a boundary")));
                }
                Link::Double(m)
            }
            Origin::ConnectedSum { left, right } => {
                Link::ConnectedSum(same_dim(lookup(left)?)?, same_dim(lookup(right)?)?)
            }
            Origin::Product { factors } => {
                let fs = factors.iter().map(|f| lookup(f)).collect::<Result<Vec<_>, _>>()?;
                if fs.len() < 2 || fs.iter().map(|&i| self.descs[i].dim).sum::<usize>() != d.dim {
                    return Err(invalid("product factors do not add up to the dimension".into()));
                }
                Link::Product(fs)
            }
            Origin::Glue { pieces, pairs } => {
                let ps = pieces
                    .iter()
                    .map(|p| lookup(p).and_then(same_dim))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut used = std::collections::BTreeSet::new();
                for &(a, b) in pairs {
                    for p in [a, b] {
                        let count = ps.get(p.piece).map(|&i| self.nodes[i].boundary.len());
                        if count.is_none_or(|c| p.component >= c) {
                            return Err(invalid(format!("no boundary component {}.b{}", p.piece, p.component)));
                        }
                        if !used.insert(p) {
                            return Err(invalid(format!("component {}.b{} glued twice", p.piece, p.component)));
                        }
                    }
                }
                Link::Glue {
                    pieces: ps,
                    pairs: pairs.clone(),
                }
            }
            Origin::Cover { base, degree } => {
                if *degree == 0 {
                    return Err(invalid("cover degree 0".into()));
                }
                Link::Cover {
                    base: same_dim(lookup(base)?)?,
                    degree: *degree,
                }
            }
            Origin::Reversed { of } => Link::Reversed(same_dim(lookup(of)?)?),
        })
    }
}

fn fmt_opt(x: Option<i64>) -> String {
    x.map_or("unknown".into(), |v| v.to_string())
}

fn witness_name(c: &Certificate) -> &'static str {
    match c.witness {
        crate::certificates::Witness::Explicit { .. } => "explicit cycle",
        crate::certificates::Witness::Double { .. } => "double replay",
        crate::certificates::Witness::StableCovers { .. } => "cover list",
    }
}
