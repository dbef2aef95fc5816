//! Statement-by-statement execution against a registry and a ledger.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde_json::{json, Map, Value as Json};
use svlab_core::certificates::{
    boundary_bound, certify_cover, certify_from_triangulation, cover_stable_bound, double_bound, product_bound, verify,
    Certificate, Ledger, NormKind, Verdict, Witness,
};
use svlab_core::cobordism::{self, Category, Cobordism, ReinhartClass};
use svlab_core::constructions::{self, CoverSpec, GlueingSpec};
use svlab_core::datasets::{self, Library};
use svlab_core::inference::{
    Answer, Construction, Description, InferenceError, Interval, Invariant, Port, ProvenanceNode, Registry,
};
use svlab_core::rational::{self, binomial, q};
use svlab_core::{manifold_check, Complex, ManifoldComplex, Q};

use crate::ast::*;
use crate::error::ScriptError;
use crate::printer;
use crate::report::*;

/// Products whose shuffle triangulation would exceed this many facets are
/// registered symbolically.
pub const PRODUCT_FACET_LIMIT: u64 = 5000;

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Directory of triangulation files shadowing the builtin datasets.
    pub datasets: Option<PathBuf>,
}

/// What a run produced: the report, plus the ledger for export.
#[derive(Clone, Debug)]
pub struct Run {
    pub report: Report,
    pub ledger: Ledger,
}

/// Parses and evaluates a script. Parse and evaluation errors abort;
/// failed assertions and inconsistencies are recorded in the report.
pub fn run_script(text: &str, options: &Options) -> Result<Run, ScriptError> {
    let script = crate::parser::parse(text)?;
    let library = match &options.datasets {
        Some(dir) => Library::load_dir(dir).map_err(|e| ScriptError::Eval {
            line: 0,
            msg: e.to_string(),
        })?,
        None => Library::builtin(),
    };
    Evaluator::new(library).run(&script)
}

#[derive(Clone, Debug)]
enum Source {
    Double(String),
    Product(String, String),
    Other,
}

#[derive(Clone, Debug)]
struct Manifold {
    reg: String,
    tri: Option<ManifoldComplex>,
    source: Source,
}

#[derive(Clone, Debug)]
enum Entity {
    Manifold(Manifold),
    Plain(Complex),
    Cobordism(Cobordism),
}

/// Value produced by an assertion's left-hand side.
#[derive(Clone, Debug)]
enum Actual {
    Interval(Interval),
    Integer(Option<i64>),
    Coords(Vec<i64>),
    Status(String),
}

impl Actual {
    fn render(&self) -> String {
        match self {
            Actual::Interval(i) => i.to_string(),
            Actual::Integer(Some(x)) => x.to_string(),
            Actual::Integer(None) => "unknown".into(),
            Actual::Coords(c) if c.is_empty() => "trivial".into(),
            Actual::Coords(c) if c.len() == 1 => c[0].to_string(),
            Actual::Coords(c) => format!("({})", c.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")),
            Actual::Status(s) => s.clone(),
        }
    }
}

struct Evaluator {
    library: Library,
    reg: Registry,
    ledger: Ledger,
    scope: BTreeMap<String, Entity>,
    /// Plain complexes in order of creation.
    plain: Vec<(String, String)>,
    dirty: bool,
    line: usize,
    report: Report,
}

type Res<T> = Result<T, String>;

fn err(e: impl ToString) -> String {
    e.to_string()
}

impl Evaluator {
    fn new(library: Library) -> Evaluator {
        Evaluator {
            library,
            reg: Registry::new(),
            ledger: Ledger::new(),
            scope: BTreeMap::new(),
            plain: Vec::new(),
            dirty: true,
            line: 0,
            report: Report {
                version: REPORT_VERSION,
                status: Status::Ok,
                inconsistency: None,
                table: vec![],
                complexes: vec![],
                ledger: vec![],
                queries: vec![],
                assertions: vec![],
                gromov: vec![],
                cobordisms: vec![],
            },
        }
    }

    fn run(mut self, script: &Script) -> Result<Run, ScriptError> {
        for s in &script.statements {
            self.line = s.pos.line;
            if let Err(msg) = self.statement(&s.stmt) {
                if self.report.inconsistency.is_some() {
                    break;
                }
                return Err(ScriptError::Eval {
                    line: s.pos.line,
                    msg: format!("`{}`: {msg}", printer::statement(&s.stmt)),
                });
            }
        }
        if self.report.inconsistency.is_none() {
            let _ = self.ensure_propagated();
        }
        if self.report.inconsistency.is_none() {
            self.finish().map_err(|msg| ScriptError::Eval { line: 0, msg })?;
        }
        self.report.status = if self.report.inconsistency.is_some() {
            Status::Inconsistent
        } else if self.report.assertions.iter().any(|a| !a.passed) {
            Status::AssertionFailed
        } else {
            Status::Ok
        };
        Ok(Run {
            report: self.report,
            ledger: self.ledger,
        })
    }

    fn statement(&mut self, s: &Stmt) -> Res<()> {
        match s {
            Stmt::Manifold { name, attrs } => self.declare(name, attrs),
            Stmt::Let { name, expr } => self.build(name, expr),
            Stmt::Certify { name, stable } => self.certify(name, stable.as_ref()),
            Stmt::Assert(a) => self.assertion(a, s),
            Stmt::Query { name, invariant } => self.query(name, invariant),
            Stmt::Cobordism { name, def } => self.cobordism(name, def),
            Stmt::Comment(_) | Stmt::Blank => Ok(()),
        }
    }

    fn bind(&mut self, name: &str, e: Entity) -> Res<()> {
        if self.scope.contains_key(name) {
            return Err(format!("`{name}` is already bound"));
        }
        if let Entity::Plain(c) = &e {
            let reason = manifold_check(c)
                .err()
                .map_or_else(|| "not oriented".into(), |e| e.to_string());
            self.plain.push((name.to_string(), reason));
        }
        self.scope.insert(name.to_string(), e);
        self.dirty = true;
        Ok(())
    }

    fn entity(&self, name: &str) -> Res<&Entity> {
        self.scope.get(name).ok_or_else(|| format!("unbound name `{name}`"))
    }

    fn manifold(&self, name: &str) -> Res<&Manifold> {
        match self.entity(name)? {
            Entity::Manifold(m) => Ok(m),
            Entity::Plain(_) => Err(format!("`{name}` is a plain complex, not an oriented manifold")),
            Entity::Cobordism(_) => Err(format!("`{name}` is a cobordism")),
        }
    }

    /// Registry name of a manifold, or of a cobordism's body.
    fn target(&self, name: &str) -> Res<String> {
        match self.entity(name)? {
            Entity::Cobordism(c) => Ok(c.body.clone()),
            _ => Ok(self.manifold(name)?.reg.clone()),
        }
    }

    fn cobordism_of(&self, name: &str) -> Res<&Cobordism> {
        match self.entity(name)? {
            Entity::Cobordism(c) => Ok(c),
            _ => Err(format!("`{name}` is not a cobordism")),
        }
    }

    fn ensure_propagated(&mut self) -> Res<()> {
        if !self.dirty && self.reg.tables().is_some() {
            return Ok(());
        }
        match self.reg.propagate() {
            Ok(_) => {
                self.dirty = false;
                Ok(())
            }
            Err(e @ InferenceError::Inconsistent { .. }) => {
                self.report.inconsistency = Some(format!("line {}: {e}", self.line));
                Err(e.to_string())
            }
            Err(e) => Err(e.to_string()),
        }
    }

    fn dataset(&self, name: &str) -> Res<Complex> {
        if let Some(Entity::Manifold(Manifold { tri: Some(m), .. })) = self.scope.get(name) {
            return Ok(m.complex().clone());
        }
        if let Some(Entity::Plain(c)) = self.scope.get(name) {
            return Ok(c.clone());
        }
        self.library.get(name).map_err(err)
    }

    fn declare(&mut self, name: &str, attrs: &[Attr]) -> Res<()> {
        let mut obj = Map::new();
        obj.insert("name".into(), json!(name));
        let mut tri = None;
        for a in attrs {
            if a.key == "triangulation" {
                let Value::Ident(src) = &a.value else {
                    return Err("`triangulation` takes a dataset or binding name".into());
                };
                let c = self.dataset(src)?;
                let m = manifold_check(&c)
                    .map_err(|e| format!("triangulation `{src}` is not an oriented manifold: {e}"))?;
                tri = Some(m.renamed(name));
                continue;
            }
            obj.insert(a.key.clone(), attr_json(&a.key, &a.value));
        }
        if let Some(m) = &tri {
            obj.entry("dim").or_insert(json!(m.dim()));
        }
        let d: Description = serde_json::from_value(Json::Object(obj)).map_err(err)?;
        match &tri {
            Some(m) => self.reg.add_triangulated(d, m),
            None => self.reg.add_manifold(d),
        }
        .map_err(err)?;
        self.bind(
            name,
            Entity::Manifold(Manifold {
                reg: name.to_string(),
                tri,
                source: Source::Other,
            }),
        )
    }

    /// Binding name of an operand, building it under its printed form when
    /// it is not bound yet.
    fn operand(&mut self, e: &Expr) -> Res<String> {
        let key = printer::expr(e);
        if !self.scope.contains_key(&key) {
            self.build(&key, e)?;
        }
        Ok(key)
    }

    fn build(&mut self, name: &str, e: &Expr) -> Res<()> {
        if let Expr::Name(n) = e {
            if let Some(x) = self.scope.get(n) {
                let x = x.clone();
                return self.bind(name, x);
            }
        }
        let entity = match e {
            Expr::Name(_) | Expr::Indexed(..) => {
                let c = self.library.get(&printer::expr(e)).map_err(err)?.with_name(name);
                match manifold_check(&c) {
                    Ok(m) => self.register_triangulated(name, Description::new(name, m.dim()), m, Source::Other)?,
                    Err(_) => Entity::Plain(c),
                }
            }
            Expr::Double(a) => {
                let a = self.operand(a)?;
                let m = self.manifold(&a)?.clone();
                let c = Construction::Double(m.reg.clone());
                let source = Source::Double(a);
                match &m.tri {
                    Some(t) => {
                        let dm = constructions::double(t, name).map_err(err)?.manifold;
                        let d = self.reg.derive(name, &c).map_err(err)?;
                        self.register_triangulated(name, d, dm, source)?
                    }
                    None => self.symbolic(name, &c, source)?,
                }
            }
            Expr::Reverse(a) => {
                let a = self.operand(a)?;
                let m = self.manifold(&a)?.clone();
                let c = Construction::Reversed(m.reg.clone());
                match &m.tri {
                    Some(t) => {
                        let rm = t.reversed().renamed(name);
                        let d = self.reg.derive(name, &c).map_err(err)?;
                        self.register_triangulated(name, d, rm, Source::Other)?
                    }
                    None => self.symbolic(name, &c, Source::Other)?,
                }
            }
            Expr::ConnSum(a, b) => {
                let (a, b) = (self.operand(a)?, self.operand(b)?);
                let (ma, mb) = (self.manifold(&a)?.clone(), self.manifold(&b)?.clone());
                let c = Construction::ConnectedSum(ma.reg.clone(), mb.reg.clone());
                match (&ma.tri, &mb.tri) {
                    (Some(x), Some(y)) => {
                        let sm = constructions::connected_sum(x, y, None, None, name)
                            .map_err(err)?
                            .manifold;
                        let d = self.reg.derive(name, &c).map_err(err)?;
                        self.register_triangulated(name, d, sm, Source::Other)?
                    }
                    _ => self.symbolic(name, &c, Source::Other)?,
                }
            }
            Expr::Product(a, b) => {
                let (a, b) = (self.operand(a)?, self.operand(b)?);
                self.product(name, &a, &b)?
            }
            Expr::Disjoint(a, b) => {
                let (a, b) = (self.operand(a)?, self.operand(b)?);
                match (self.entity(&a)?.clone(), self.entity(&b)?.clone()) {
                    (Entity::Manifold(ma), Entity::Manifold(mb)) => {
                        let c = Construction::Glue {
                            pieces: vec![ma.reg.clone(), mb.reg.clone()],
                            pairs: vec![],
                            amenable: false,
                        };
                        match (&ma.tri, &mb.tri) {
                            (Some(x), Some(y)) => {
                                let k = constructions::disjoint_union(name, x.complex(), y.complex()).map_err(err)?;
                                let dm = manifold_check(&k).map_err(err)?;
                                let d = self.reg.derive(name, &c).map_err(err)?;
                                self.register_triangulated(name, d, dm, Source::Other)?
                            }
                            _ => self.symbolic(name, &c, Source::Other)?,
                        }
                    }
                    _ => {
                        let (x, y) = (self.dataset(&a)?, self.dataset(&b)?);
                        Entity::Plain(constructions::disjoint_union(name, &x, &y).map_err(err)?)
                    }
                }
            }
            Expr::Glue {
                left,
                left_component,
                right,
                right_component,
                map,
            } => {
                let (l, r) = (self.operand(left)?, self.operand(right)?);
                let (ml, mr) = (self.manifold(&l)?.clone(), self.manifold(&r)?.clone());
                let same = l == r;
                let pieces = if same {
                    vec![ml.reg.clone()]
                } else {
                    vec![ml.reg.clone(), mr.reg.clone()]
                };
                let pairs = vec![(
                    Port {
                        piece: 0,
                        component: *left_component,
                    },
                    Port {
                        piece: usize::from(!same),
                        component: *right_component,
                    },
                )];
                match (&ml.tri, &mr.tri) {
                    (Some(x), Some(y)) => {
                        let spec = GlueingSpec {
                            left: x.clone(),
                            left_component: *left_component,
                            right: (!same).then(|| y.clone()),
                            right_component: *right_component,
                            vertex_bijection: map.as_ref().map(|m| m.iter().copied().collect()),
                        };
                        let gm = constructions::glue(&spec, name).map_err(err)?.manifold;
                        let d = self.reg.derive_matched_glue(name, &pieces, &pairs).map_err(err)?;
                        self.register_triangulated(name, d, gm, Source::Other)?
                    }
                    _ => {
                        if map.is_some() {
                            return Err("a vertex map needs triangulated pieces".into());
                        }
                        let c = Construction::Glue {
                            pieces,
                            pairs,
                            amenable: false,
                        };
                        self.symbolic(name, &c, Source::Other)?
                    }
                }
            }
            Expr::Cover { base, cocycle, degree } => {
                let b = self.operand(base)?;
                let m = self.manifold(&b)?.clone();
                let t = m
                    .tri
                    .as_ref()
                    .ok_or_else(|| format!("cover of `{b}` needs a triangulated base"))?;
                let z = datasets::cocycle(t.complex(), cocycle).map_err(err)?;
                let spec = CoverSpec {
                    base: t.clone(),
                    cocycle: z,
                    degree: *degree as usize,
                };
                let cm = constructions::cyclic_cover(&spec, name).map_err(err)?.manifold;
                let d = self
                    .reg
                    .derive(name, &Construction::Cover(m.reg.clone(), *degree))
                    .map_err(err)?;
                self.register_triangulated(name, d, cm, Source::Other)?
            }
        };
        self.bind(name, entity)
    }

    fn product(&mut self, name: &str, a: &str, b: &str) -> Res<Entity> {
        let (ea, eb) = (self.entity(a)?.clone(), self.entity(b)?.clone());
        let (Entity::Manifold(ma), Entity::Manifold(mb)) = (&ea, &eb) else {
            let (x, y) = (self.dataset(a)?, self.dataset(b)?);
            return Ok(Entity::Plain(
                constructions::product(&x, &y, name).map_err(err)?.complex,
            ));
        };
        let c = Construction::Product(vec![ma.reg.clone(), mb.reg.clone()]);
        let source = Source::Product(a.to_string(), b.to_string());
        if let (Some(x), Some(y)) = (&ma.tri, &mb.tri) {
            let (p, r) = (x.dim() as u64, y.dim() as u64);
            let facets = binomial(p + r, p) * q(x.complex().facet_count() as i64) * q(y.complex().facet_count() as i64);
            if x.is_closed() && y.is_closed() && facets <= q(PRODUCT_FACET_LIMIT as i64) {
                let k = constructions::product(x.complex(), y.complex(), name)
                    .map_err(err)?
                    .complex;
                let pm = manifold_check(&k).map_err(err)?;
                let d = self.reg.derive(name, &c).map_err(err)?;
                return self.register_triangulated(name, d, pm, source);
            }
        }
        self.symbolic(name, &c, source)
    }

    fn register_triangulated(&mut self, name: &str, d: Description, m: ManifoldComplex, source: Source) -> Res<Entity> {
        let m = m.renamed(name);
        self.reg.add_triangulated(d, &m).map_err(err)?;
        Ok(Entity::Manifold(Manifold {
            reg: name.to_string(),
            tri: Some(m),
            source,
        }))
    }

    fn symbolic(&mut self, name: &str, c: &Construction, source: Source) -> Res<Entity> {
        self.reg.add_construction(name, c).map_err(err)?;
        Ok(Entity::Manifold(Manifold {
            reg: name.to_string(),
            tri: None,
            source,
        }))
    }

    fn certify(&mut self, name: &str, stable: Option<&Stable>) -> Res<()> {
        let m = self.manifold(name)?.clone();
        let t = m
            .tri
            .as_ref()
            .ok_or_else(|| format!("`{name}` has no triangulation to certify"))?;
        if let Some(s) = stable {
            let z = datasets::cocycle(t.complex(), &s.cocycle).map_err(err)?;
            let covers = s
                .degrees
                .iter()
                .map(|&d| certify_cover(t, &z, d as usize))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let cert = cover_stable_bound(t, covers).map_err(err)?;
            return self.record(cert.with_target_name(&m.reg));
        }
        let (integral, real) = certify_from_triangulation(t).map_err(err)?;
        let relative = integral.target.kind.is_relative();
        for c in [integral.clone(), real.clone()] {
            self.record(c.with_target_name(&m.reg))?;
        }
        match &m.source {
            Source::Double(inner) => {
                let inner = self.manifold(inner)?.reg.clone();
                for kind in [NormKind::RelativeIntegral, NormKind::RelativeReal] {
                    if let Some(c) = self
                        .ledger
                        .best(&inner, kind)
                        .filter(|c| c.target.kind == kind)
                        .cloned()
                    {
                        self.record(double_bound(&c).map_err(err)?.with_target_name(&m.reg))?;
                    }
                }
            }
            Source::Product(a, b) => {
                let (a, b) = (self.manifold(a)?.reg.clone(), self.manifold(b)?.reg.clone());
                if let (Some(ca), Some(cb)) = (self.explicit_integral(&a), self.explicit_integral(&b)) {
                    self.record(product_bound(&ca, &cb).map_err(err)?.with_target_name(&m.reg))?;
                }
            }
            Source::Other => {}
        }
        // A single boundary component also gets the ∂ of the relative cycle.
        let h = self.reg.handle(&m.reg).map_err(err)?;
        if let ([b], true) = (self.reg.boundary(h).as_slice(), relative) {
            let label = self.reg.description(*b).name.clone();
            if let Ok(c) = boundary_bound(&integral) {
                self.record(c.with_target_name(label))?;
            }
        }
        Ok(())
    }

    fn explicit_integral(&self, manifold: &str) -> Option<Certificate> {
        self.ledger
            .certificates()
            .iter()
            .filter(|c| c.target.manifold == manifold && c.target.kind.is_integral() && c.explicit().is_some())
            .filter(|c| c.target.kind != NormKind::StableIntegral)
            .min_by(|a, b| a.bound.cmp(&b.bound))
            .cloned()
    }

    fn record(&mut self, cert: Certificate) -> Res<()> {
        let verdict = verify(&cert);
        let entry = LedgerEntry {
            index: self.ledger.len(),
            line: self.line,
            manifold: cert.target.manifold.clone(),
            kind: cert.target.kind,
            bound: rational::display(&cert.bound),
            witness: match cert.witness {
                Witness::Explicit { .. } => "explicit",
                Witness::Double { .. } => "double",
                Witness::StableCovers { .. } => "stable-covers",
            }
            .into(),
            verdict: verdict.clone(),
        };
        self.ledger.append(cert.clone()).map_err(err)?;
        self.report.ledger.push(entry);
        if verdict == Verdict::Pass {
            self.reg.import_certificate(&cert).map_err(err)?;
            self.dirty = true;
        }
        Ok(())
    }

    /// Value of `func(name)` with the derivation behind it.
    fn evaluate(&mut self, func: &str, name: &str) -> Res<(Actual, Vec<ProvenanceNode>, Json)> {
        self.ensure_propagated()?;
        if let Ok(inv) = func.parse::<Invariant>() {
            let target = self.target(name)?;
            let r = self.reg.query(&target, inv).map_err(err)?;
            let actual = match r.answer {
                Answer::Interval(i) => Actual::Interval(i),
                Answer::Integer(x) => Actual::Integer(x),
            };
            return Ok((actual, r.provenance, Json::Null));
        }
        match func {
            "chi_functor" => {
                let f = self.cobordism_of(name)?;
                let x = cobordism::chi_functor(&self.reg, f).map_err(err)?;
                Ok((Actual::Integer(Some(x)), vec![], Json::Null))
            }
            "sv_functor" => {
                let f = self.cobordism_of(name)?;
                let x = cobordism::sv_functor(&self.reg, f).map_err(err)?;
                Ok((Actual::Interval(x), vec![], Json::Null))
            }
            "reinhart" => {
                let target = self.target(name)?;
                let c = cobordism::reinhart_class(&self.reg, &target).map_err(err)?;
                Ok((
                    Actual::Coords(coords(&c)),
                    vec![],
                    serde_json::to_value(c).map_err(err)?,
                ))
            }
            "gromov" => {
                let target = self.target(name)?;
                let h = self.reg.handle(&target).map_err(err)?;
                let g = self.reg.gromov_check(h).map_err(err)?;
                let status = g.status.name().replace('-', "_");
                Ok((Actual::Status(status), vec![], serde_json::to_value(&g).map_err(err)?))
            }
            "obstruction" => {
                let target = self.target(name)?;
                let w = cobordism::extension_obstruction(&self.reg, &target).map_err(err)?;
                let mut detail = serde_json::to_value(&w).map_err(err)?;
                detail["text"] = json!(w.render());
                let last = w.steps.last().cloned().unwrap_or_default();
                Ok((Actual::Status(last), vec![], detail))
            }
            _ => Err(format!("unknown function `{func}`")),
        }
    }

    fn assertion(&mut self, a: &Assertion, s: &Stmt) -> Res<()> {
        let (actual, provenance, _) = self.evaluate(&a.func, &a.arg)?;
        let passed = compare(&actual, a.op, &a.expected)?;
        self.report.assertions.push(AssertionEntry {
            line: self.line,
            statement: printer::statement(s),
            passed,
            actual: actual.render(),
            provenance,
        });
        Ok(())
    }

    fn query(&mut self, name: &str, invariant: &str) -> Res<()> {
        let (actual, provenance, detail) = self.evaluate(invariant, name)?;
        self.report.queries.push(QueryEntry {
            line: self.line,
            target: name.to_string(),
            invariant: invariant.to_string(),
            answer: actual.render(),
            detail,
            provenance,
        });
        Ok(())
    }

    fn cobordism(&mut self, name: &str, def: &CobDef) -> Res<()> {
        match def {
            CobDef::Explicit {
                body,
                incoming,
                outgoing,
            } => {
                let body = self.manifold(body)?.reg.clone();
                let c = Cobordism::new(&self.reg, &body, incoming.clone(), outgoing.clone()).map_err(err)?;
                self.add_cobordism(name, c)
            }
            CobDef::Word(Word::Name(n)) => {
                let c = self.cobordism_of(n)?.clone();
                self.add_cobordism(name, c)
            }
            CobDef::Word(w) => self.word(name, w).map(|_| ()),
        }
    }

    fn add_cobordism(&mut self, name: &str, c: Cobordism) -> Res<()> {
        self.report.cobordisms.push(CobordismEntry {
            name: name.to_string(),
            body: c.body.clone(),
            source: c.source.to_string(),
            target: c.target.to_string(),
            amenable: c.is_member(&self.reg),
        });
        self.bind(name, Entity::Cobordism(c))
    }

    /// Evaluates a word, binding it (and its sub-words) by name.
    fn word(&mut self, name: &str, w: &Word) -> Res<String> {
        let (a, b) = match w {
            Word::Name(n) => {
                self.cobordism_of(n)?;
                return Ok(n.clone());
            }
            Word::Compose(a, b) | Word::Tensor(a, b) => (a, b),
        };
        let fa = self.word(&printer::word(a), a)?;
        let fb = self.word(&printer::word(b), b)?;
        if self.scope.contains_key(name) {
            return Ok(name.to_string());
        }
        let (f, g) = (self.cobordism_of(&fa)?.clone(), self.cobordism_of(&fb)?.clone());
        let c = match w {
            Word::Compose(..) => {
                let category = if f.is_member(&self.reg) && g.is_member(&self.reg) {
                    Category::Amenable
                } else {
                    Category::Oriented
                };
                cobordism::compose(&mut self.reg, &f, &g, name, category)
            }
            _ => cobordism::tensor(&mut self.reg, &f, &g, name),
        }
        .map_err(err)?;
        self.add_cobordism(name, c)?;
        Ok(name.to_string())
    }

    fn finish(&mut self) -> Res<()> {
        let rows = self.reg.table().map_err(err)?;
        for row in rows {
            let mut provenance = BTreeMap::new();
            let invariants: &[Invariant] = if row.relative {
                &[
                    Invariant::SvRel,
                    Invariant::IsvRel,
                    Invariant::SisvRel,
                    Invariant::Chi,
                    Invariant::ChiRel,
                ]
            } else {
                &[Invariant::Sv, Invariant::Isv, Invariant::Sisv, Invariant::Chi]
            };
            for &inv in invariants {
                let r = self.reg.query(&row.name, inv).map_err(err)?;
                let rules: BTreeSet<String> = r
                    .provenance
                    .iter()
                    .flat_map(|p| p.rules())
                    .map(str::to_string)
                    .collect();
                if !rules.is_empty() {
                    provenance.insert(inv.name().to_string(), rules.into_iter().collect());
                }
            }
            let h = self.reg.handle(&row.name).map_err(err)?;
            self.report.gromov.push(self.reg.gromov_check(h).map_err(err)?);
            self.report.table.push(TableEntry { row, provenance });
        }
        for (name, reason) in &self.plain {
            if let Some(Entity::Plain(c)) = self.scope.get(name) {
                self.report.complexes.push(PlainComplex {
                    name: name.clone(),
                    dim: c.dim(),
                    facets: c.facet_count(),
                    chi: c.euler_characteristic(),
                    reason: reason.clone(),
                });
            }
        }
        Ok(())
    }
}

fn coords(c: &ReinhartClass) -> Vec<i64> {
    match *c {
        ReinhartClass::Points { count, signed } => vec![count, signed],
        ReinhartClass::Circles { parity } => vec![parity as i64],
        ReinhartClass::Surface { half_chi } => vec![half_chi],
        ReinhartClass::Trivial => vec![],
        ReinhartClass::Four { chi, signature } => vec![chi, signature],
    }
}

fn attr_json(key: &str, v: &Value) -> Json {
    match v {
        Value::Bool(b) => json!(b),
        Value::Unknown => Json::Null,
        Value::Int(n) => json!(n),
        Value::Ident(s) if key == "boundary" => json!({ "manifold": s }),
        Value::Ident(s) => json!(s),
        Value::List(xs) => Json::Array(xs.iter().map(|x| attr_json(key, x)).collect()),
        Value::Block(attrs) => Json::Object(
            attrs
                .iter()
                .map(|a| (a.key.clone(), attr_json(&a.key, &a.value)))
                .collect(),
        ),
        Value::Tagged(name, attrs) => {
            let mut m: Map<String, Json> = attrs
                .iter()
                .map(|a| (a.key.clone(), attr_json(&a.key, &a.value)))
                .collect();
            m.insert("manifold".into(), json!(name));
            Json::Object(m)
        }
    }
}

fn ordered(x: &Q, op: Op, y: &Q) -> bool {
    match op {
        Op::Eq => x == y,
        Op::Ne => x != y,
        Op::Le => x <= y,
        Op::Ge => x >= y,
        Op::Lt => x < y,
        Op::Gt => x > y,
    }
}

/// Whether `actual OP expected` holds. Interval comparisons hold for every
/// point of the interval; `==` against an interval literal is equality of
/// intervals.
fn compare(actual: &Actual, op: Op, expected: &Expected) -> Res<bool> {
    let mismatch = || {
        Err(format!(
            "cannot compare {} with `{}` using {}",
            actual.render(),
            printer::expected(expected),
            op.symbol()
        ))
    };
    match (actual, expected) {
        (Actual::Integer(None), Expected::Number(_)) => Ok(false),
        (Actual::Integer(Some(x)), Expected::Number(y)) => Ok(ordered(&q(*x), op, y)),
        (Actual::Interval(i), Expected::Number(y)) => Ok(match op {
            Op::Eq => i.exact_value() == Some(y),
            Op::Ne => !i.contains(y),
            Op::Le => i.hi.as_ref().is_some_and(|h| h <= y),
            Op::Lt => i.hi.as_ref().is_some_and(|h| h < y),
            Op::Ge => i.lo.value >= *y,
            Op::Gt => i.lo.value > *y || (i.lo.value == *y && i.lo.strict),
        }),
        (Actual::Interval(i), Expected::Inf) => Ok(match op {
            Op::Eq => false,
            Op::Ne | Op::Lt => i.hi.is_some(),
            Op::Le => true,
            Op::Ge | Op::Gt => false,
        }),
        (Actual::Interval(i), Expected::Interval { lo, strict, hi }) => {
            let same = i.lo.value == *lo && i.lo.strict == *strict && i.hi == *hi;
            match op {
                Op::Eq => Ok(same),
                Op::Ne => Ok(!same),
                _ => mismatch(),
            }
        }
        (Actual::Coords(c), Expected::Number(y)) if matches!(op, Op::Eq | Op::Ne) => {
            let same = c.len() == 1 && q(c[0]) == *y;
            Ok(same == (op == Op::Eq))
        }
        (Actual::Coords(c), Expected::Tuple(ys)) if matches!(op, Op::Eq | Op::Ne) => {
            let same = c.len() == ys.len() && c.iter().zip(ys).all(|(x, y)| q(*x) == *y);
            Ok(same == (op == Op::Eq))
        }
        (Actual::Coords(c), Expected::Ident(s)) if s == "trivial" && matches!(op, Op::Eq | Op::Ne) => {
            Ok(c.is_empty() == (op == Op::Eq))
        }
        (Actual::Status(s), Expected::Ident(t)) if matches!(op, Op::Eq | Op::Ne) => {
            Ok((*s == t.replace('-', "_")) == (op == Op::Eq))
        }
        _ => mismatch(),
    }
}
