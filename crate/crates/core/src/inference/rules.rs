use std::borrow::Cow;
use std::collections::BTreeSet;

use num_traits::Zero;

use crate::rational::{self, q, Q};

use super::description::{yes, Description};
use super::engine::{Conclusion, Value};
use super::interval::{upper_add, upper_mul, upper_scale, Interval, Lower};
use super::{Fact, Link, Node, Norm, Quantity, Registry, State};

pub(crate) struct Ctx<'a> {
    pub reg: &'a Registry,
    pub states: &'a [State],
}

impl Ctx<'_> {
    fn d(&self, i: usize) -> &Description {
        &self.reg.descriptions()[i]
    }

    fn node(&self, i: usize) -> &Node {
        self.reg.node(i)
    }

    fn closed(&self, i: usize) -> bool {
        self.d(i).closed == Some(true)
    }

    fn bounded(&self, i: usize) -> bool {
        self.d(i).closed == Some(false) && !self.node(i).boundary.is_empty()
    }

    /// Oriented and connected.
    fn basic(&self, i: usize) -> bool {
        yes(self.d(i).oriented) && yes(self.d(i).connected)
    }

    fn iv(&self, i: usize, n: Norm) -> &Interval {
        self.states[i].norm(n)
    }

    fn chi(&self, i: usize) -> Option<i64> {
        self.states[i].chi
    }

    fn chi_rel(&self, i: usize) -> Option<i64> {
        self.states[i].chi_rel
    }

    fn boundary(&self, i: usize) -> &[usize] {
        &self.node(i).boundary
    }
}

fn lo(manifold: usize, n: Norm) -> Fact {
    Fact {
        manifold,
        quantity: Quantity::Lo(n),
    }
}

fn hi(manifold: usize, n: Norm) -> Fact {
    Fact {
        manifold,
        quantity: Quantity::Hi(n),
    }
}

fn chi(manifold: usize) -> Fact {
    Fact {
        manifold,
        quantity: Quantity::Chi,
    }
}

fn chi_rel(manifold: usize) -> Fact {
    Fact {
        manifold,
        quantity: Quantity::ChiRel,
    }
}

struct Emit<'o> {
    out: &'o mut Vec<Conclusion>,
    rule: &'static str,
}

impl Emit<'_> {
    fn push(&mut self, target: Fact, value: Value, inputs: Vec<Fact>, statement: impl Into<Cow<'static, str>>) {
        self.out.push(Conclusion {
            target,
            value,
            inputs,
            rule: self.rule.into(),
            statement: statement.into(),
        });
    }

    fn upper(&mut self, i: usize, n: Norm, v: Option<Q>, inputs: Vec<Fact>, s: impl Into<Cow<'static, str>>) {
        if let Some(v) = v {
            self.push(hi(i, n), Value::Upper(v), inputs, s);
        }
    }

    fn lower(&mut self, i: usize, n: Norm, v: Lower, inputs: Vec<Fact>, s: impl Into<Cow<'static, str>>) {
        if v.is_positive() {
            self.push(lo(i, n), Value::Lower(v.normalized()), inputs, s);
        }
    }

    fn vanish(&mut self, i: usize, inputs: Vec<Fact>, s: impl Into<Cow<'static, str>>) {
        self.upper(i, Norm::Sv, Some(Q::zero()), inputs, s);
    }

    fn int(&mut self, target: Fact, v: Option<i64>, inputs: Vec<Fact>, s: impl Into<Cow<'static, str>>) {
        if let Some(v) = v {
            self.push(target, Value::Int(v), inputs, s);
        }
    }
}

type Apply = fn(&Ctx, usize, &mut Emit);

pub(crate) struct Rule {
    pub id: &'static str,
    pub summary: &'static str,
    apply: Apply,
}

impl Rule {
    pub(crate) fn run(&self, ctx: &Ctx, i: usize, out: &mut Vec<Conclusion>) {
        (self.apply)(ctx, i, &mut Emit { out, rule: self.id });
    }
}

pub(crate) static RULES: &[Rule] = &[
    Rule {
        id: "R-amenable",
        summary: "closed, n ≥ 1, π₁ amenable or boundedly n-acyclic ⇒ ‖M‖ = 0",
        apply: amenable,
    },
    Rule {
        id: "R-bdry-amenable",
        summary: "π₁(M) and every π₁(∂ᵢM) amenable ⇒ ‖M,∂M‖ = 0",
        apply: bdry_amenable,
    },
    Rule {
        id: "R-lex",
        summary: "π₁(M) ∈ lex, ∂M → M π₁-surjective, ‖∂M‖ = 0 ⇒ ‖M,∂M‖ = 0",
        apply: lex,
    },
    Rule {
        id: "R-selfmap",
        summary: "self-map of degree d with |d| ≥ 2 ⇒ ‖M,∂M‖ = 0",
        apply: selfmap,
    },
    Rule {
        id: "R-S1",
        summary: "non-trivial S¹-action or F-structure ⇒ ‖M‖ = 0",
        apply: circle,
    },
    Rule {
        id: "R-affine",
        summary: "aspherical, affine with injective holonomy containing a pure translation ⇒ ‖M‖ = 0",
        apply: affine,
    },
    Rule {
        id: "R-graph3",
        summary: "graph 3-manifold ⇒ ‖M‖ = 0",
        apply: graph3,
    },
    Rule {
        id: "R-mapping-torus-3",
        summary: "mapping torus of a closed oriented 3-manifold ⇒ ‖M‖ = 0",
        apply: mapping_torus,
    },
    Rule {
        id: "R-amcat-sv",
        summary: "amcat(M) ≤ n ⇒ ‖M‖ = 0",
        apply: amcat_sv,
    },
    Rule {
        id: "R-amcat-chi",
        summary: "M aspherical, amcat(M) ≤ n ⇒ χ(M) = 0",
        apply: amcat_chi,
    },
    Rule {
        id: "R-fibre",
        summary: "N → M → B, amcat(N)·(dim B + 1) ≤ dim M ⇒ ‖M‖ = 0",
        apply: fibre,
    },
    Rule {
        id: "R-relvan",
        summary: "amenable cover of multiplicity ≤ n, ≤ n−1 on ∂M, amenable in ∂M ⇒ ‖M,∂M‖ = 0",
        apply: relvan,
    },
    Rule {
        id: "R-coamenable",
        summary: "locally co-amenable subcomplex ⇒ ‖M,∂M‖ = 0",
        apply: coamenable,
    },
    Rule {
        id: "R-triple-product",
        summary: "‖M₁×M₂×M₃, ∂‖ = 0 for compact PL factors with non-empty boundary",
        apply: triple_product,
    },
    Rule {
        id: "R-bounding",
        summary: "‖∂M‖ ≤ (n+1)·‖M,∂M‖",
        apply: bounding,
    },
    Rule {
        id: "R-bdry-est",
        summary: "‖M,∂M‖ ≥ ‖∂M‖/(n+1), also for ‖·‖_Z and, with connected ∂M, ‖·‖_Z^∞",
        apply: bdry_est,
    },
    Rule {
        id: "R-product-bounds",
        summary: "‖M‖·‖N,∂N‖ ≤ ‖M×N,∂‖ ≤ C(m+n,m)·‖M‖·‖N,∂N‖ for closed M",
        apply: product_bounds,
    },
    Rule {
        id: "R-product-chi",
        summary: "χ(M×N) = χ(M)·χ(N), χ(M×N,∂) = χ(M,∂M)·χ(N,∂N)",
        apply: product_chi,
    },
    Rule {
        id: "R-connsum",
        summary: "χ(M#N) = χ(M) + χ(N) − χ(Sⁿ); ‖M#N‖ = ‖M‖ + ‖N‖ for n ≥ 3",
        apply: connsum,
    },
    Rule {
        id: "R-glue-chi",
        summary: "χ(Z) = Σχ(Mᵢ) − Σχ(Sⱼ), χ(Z,∂Z) = Σχ(Mᵢ,∂Mᵢ) + Σχ(Sⱼ)",
        apply: glue_chi,
    },
    Rule {
        id: "R-disjoint",
        summary: "‖M ⊔ N‖ = ‖M‖ + ‖N‖",
        apply: disjoint,
    },
    Rule {
        id: "R-glue-subadd",
        summary: "amenable boundary components ⇒ ‖Z,∂Z‖ ≤ Σ‖Mᵢ,∂Mᵢ‖",
        apply: glue_subadd,
    },
    Rule {
        id: "R-glue-add",
        summary: "amenable, π₁-injective glued components ⇒ ‖Z,∂Z‖ = Σ‖Mᵢ,∂Mᵢ‖",
        apply: glue_add,
    },
    Rule {
        id: "R-double",
        summary: "χ(D(M)) = χ(M) + χ(M,∂M); ‖D(M)‖ ≤ 2·‖M,∂M‖, also for ‖·‖_Z",
        apply: double,
    },
    Rule {
        id: "R-stable-double",
        summary: "‖D(M)‖_Z^∞ ≤ 2·‖M,∂M‖_Z^∞",
        apply: stable_double,
    },
    Rule {
        id: "R-cover",
        summary: "degree-d cover N → M: χ(N) = d·χ(M), ‖N‖ = d·‖M‖, ‖M‖_Z^∞ ≤ ‖N‖_Z/d",
        apply: cover,
    },
    Rule {
        id: "R-orientation",
        summary: "‖−M‖ = ‖M‖ and χ(−M) = χ(M)",
        apply: orientation,
    },
    Rule {
        id: "R-betti",
        summary: "b_k(M) ≤ ‖M,∂M‖_Z, |χ(M,∂M)| ≤ (n+1)·‖M,∂M‖_Z",
        apply: betti,
    },
    Rule {
        id: "R-chi-stable",
        summary: "|χ(M,∂M)| ≤ (n+1)·‖M,∂M‖_Z^∞",
        apply: chi_stable,
    },
    Rule {
        id: "R-integral-ge-real",
        summary: "‖·‖ ≤ ‖·‖_Z^∞ ≤ ‖·‖_Z",
        apply: integral_ge_real,
    },
    Rule {
        id: "R-sisv-equal",
        summary: "‖·‖_Z^∞ = ‖·‖ for aspherical surfaces, aspherical 3-manifolds with toroidal or empty boundary, and residually finite aspherical cases",
        apply: sisv_equal,
    },
    Rule {
        id: "R-positive",
        summary: "hyperbolic, negatively curved, locally symmetric of non-compact type, or essential with hyperbolic π₁ ⇒ ‖M‖ > 0",
        apply: positive,
    },
    Rule {
        id: "R-chi-rel",
        summary: "χ(M,∂M) = χ(M) − χ(∂M)",
        apply: chi_rel_rule,
    },
    Rule {
        id: "R-chi-odd",
        summary: "closed, n odd ⇒ χ(M) = 0",
        apply: chi_odd,
    },
    Rule {
        id: "R-chi-parity",
        summary: "n even ⇒ χ(M,∂M) = χ(M); n odd ⇒ χ(M,∂M) = −χ(M), χ(∂M) = 2·χ(M)",
        apply: chi_parity,
    },
];

/// Rule ids with a one-line formula each, in application order.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    let mut out: Vec<_> = RULES.iter().map(|r| (r.id, r.summary)).collect();
    out.push((
        "R-parity-products",
        "M, N aspherical with π₁-injective aspherical boundary, dim M ≢ dim N mod 2 ⇒ ∂(M×N) aspherical",
    ));
    out
}

fn amenable(c: &Ctx, i: usize, e: &mut Emit) {
    let d = c.d(i);
    if !(c.closed(i) && c.basic(i) && d.dim >= 1) {
        return;
    }
    if yes(d.amenable) {
        e.vanish(i, vec![], "π₁(M) amenable, n ≥ 1 ⇒ ‖M‖ = 0");
    }
    if yes(d.boundedly_acyclic) {
        e.vanish(i, vec![], "π₁(M) boundedly n-acyclic ⇒ ‖M‖ = 0");
    }
}

fn bdry_amenable(c: &Ctx, i: usize, e: &mut Emit) {
    let d = c.d(i);
    if c.bounded(i) && c.basic(i) && yes(d.amenable) && c.boundary(i).iter().all(|&b| yes(c.d(b).amenable)) {
        e.vanish(i, vec![], "π₁(M) and every π₁(∂ᵢM) amenable ⇒ ‖M,∂M‖ = 0");
    }
}

fn lex(c: &Ctx, i: usize, e: &mut Emit) {
    let d = c.d(i);
    if !(c.bounded(i) && c.basic(i) && yes(d.lex) && d.boundary.iter().all(|r| yes(r.pi1_surjective))) {
        return;
    }
    let parts: BTreeSet<usize> = c.boundary(i).iter().copied().collect();
    if parts.iter().all(|&b| c.iv(b, Norm::Sv).is_zero()) {
        let inputs = parts.iter().map(|&b| hi(b, Norm::Sv)).collect();
        e.vanish(i, inputs, "π₁(M) ∈ lex, ∂M → M π₁-surjective, ‖∂M‖ = 0 ⇒ ‖M,∂M‖ = 0");
    }
}

fn selfmap(c: &Ctx, i: usize, e: &mut Emit) {
    if let Some(deg) = c.d(i).self_map_degree {
        if c.basic(i) && c.d(i).closed.is_some() && deg.abs() >= 2 {
            e.vanish(
                i,
                vec![],
                format!("‖M,∂M‖ ≥ |deg f|·‖M,∂M‖ with deg f = {deg} ⇒ ‖M,∂M‖ = 0"),
            );
        }
    }
}

fn circle(c: &Ctx, i: usize, e: &mut Emit) {
    if !(c.closed(i) && c.basic(i)) {
        return;
    }
    if yes(c.d(i).s1_action) {
        e.vanish(i, vec![], "non-trivial S¹-action on M ⇒ ‖M‖ = 0");
    }
    if yes(c.d(i).f_structure) {
        e.vanish(i, vec![], "F-structure on M ⇒ ‖M‖ = 0");
    }
}

fn affine(c: &Ctx, i: usize, e: &mut Emit) {
    let d = c.d(i);
    if c.closed(i) && c.basic(i) && yes(d.aspherical) && yes(d.affine_translation) {
        e.vanish(
            i,
            vec![],
            "M aspherical affine, holonomy injective with a pure translation ⇒ ‖M‖ = 0",
        );
    }
}

fn graph3(c: &Ctx, i: usize, e: &mut Emit) {
    if c.closed(i) && c.basic(i) && c.d(i).dim == 3 && yes(c.d(i).graph_manifold) {
        e.vanish(i, vec![], "M graph 3-manifold ⇒ ‖M‖ = 0");
    }
}

fn mapping_torus(c: &Ctx, i: usize, e: &mut Emit) {
    if c.closed(i) && c.basic(i) && c.d(i).dim == 4 && yes(c.d(i).mapping_torus) {
        e.vanish(i, vec![], "M = T_f, f: N → N, N closed oriented 3-manifold ⇒ ‖M‖ = 0");
    }
}

fn amcat_bound(c: &Ctx, i: usize) -> Option<u64> {
    let d = c.d(i);
    d.amcat_upper.filter(|&a| a <= d.dim as u64)
}

fn amcat_sv(c: &Ctx, i: usize, e: &mut Emit) {
    if let (true, Some(a)) = (c.closed(i) && c.basic(i), amcat_bound(c, i)) {
        e.vanish(i, vec![], format!("amcat(M) ≤ {a} ≤ n = {} ⇒ ‖M‖ = 0", c.d(i).dim));
    }
}

fn amcat_chi(c: &Ctx, i: usize, e: &mut Emit) {
    if let (true, Some(a)) = (c.closed(i) && c.basic(i) && yes(c.d(i).aspherical), amcat_bound(c, i)) {
        let s = format!("M aspherical, amcat(M) ≤ {a} ≤ n = {} ⇒ χ(M) = 0", c.d(i).dim);
        e.int(chi(i), Some(0), vec![], s);
    }
}

fn fibre(c: &Ctx, i: usize, e: &mut Emit) {
    let Some((f, b)) = c.node(i).fibre else { return };
    if !(c.closed(i) && c.basic(i)) {
        return;
    }
    let n = c.d(i).dim as u64;
    let base_dim = c.d(b).dim as u64;
    let Some(a) = c.d(f).amcat_upper else { return };
    if a * (base_dim + 1) > n {
        return;
    }
    e.vanish(
        i,
        vec![],
        format!("amcat(N)·(dim B + 1) ≤ {a}·{} ≤ dim M = {n} ⇒ ‖M‖ = 0", base_dim + 1),
    );
    if yes(c.d(i).aspherical) {
        e.int(
            chi(i),
            Some(0),
            vec![],
            "M aspherical, amcat(N)·(dim B + 1) ≤ dim M ⇒ χ(M) = 0",
        );
    } else if yes(c.d(f).aspherical) && c.closed(f) && c.d(f).dim >= 1 {
        e.int(
            chi(i),
            Some(0),
            vec![],
            "N aspherical, amcat(N) ≤ dim N ⇒ χ(M) = χ(N)·χ(B) = 0",
        );
    }
}

fn relvan(c: &Ctx, i: usize, e: &mut Emit) {
    if c.bounded(i) && c.basic(i) && yes(c.d(i).relative_amenable_cover) {
        e.vanish(i, vec![], "relative amenable cover of M ⇒ ‖M,∂M‖ = 0");
    }
}

fn coamenable(c: &Ctx, i: usize, e: &mut Emit) {
    if c.bounded(i) && c.basic(i) && yes(c.d(i).co_amenable_subcomplex) {
        e.vanish(i, vec![], "locally co-amenable subcomplex in M ⇒ ‖M,∂M‖ = 0");
    }
}

fn product_leaves(c: &Ctx, i: usize, out: &mut Vec<usize>) {
    match &c.node(i).link {
        Some(Link::Product(fs)) => {
            for &f in fs {
                product_leaves(c, f, out);
            }
        }
        _ => out.push(i),
    }
}

fn triple_product(c: &Ctx, i: usize, e: &mut Emit) {
    if !matches!(c.node(i).link, Some(Link::Product(_))) || !c.basic(i) {
        return;
    }
    let mut leaves = Vec::new();
    product_leaves(c, i, &mut leaves);
    let with_boundary = leaves.iter().filter(|&&l| c.bounded(l)).count();
    if with_boundary >= 3 && leaves.iter().all(|&l| c.basic(l) && c.d(l).closed.is_some()) {
        e.vanish(
            i,
            vec![],
            format!("{with_boundary} factors with non-empty boundary ⇒ ‖M₁×M₂×M₃, ∂‖ = 0"),
        );
    }
}

fn bounding(c: &Ctx, i: usize, e: &mut Emit) {
    if !(c.bounded(i) && c.basic(i)) {
        return;
    }
    let n1 = q(c.d(i).dim as i64 + 1);
    let parts: BTreeSet<usize> = c.boundary(i).iter().copied().collect();
    let single = c.boundary(i).len() == 1;
    for &b in &parts {
        for n in Norm::ALL {
            if n == Norm::Sisv && !single {
                continue;
            }
            let v = upper_scale(&c.iv(i, n).hi, &n1);
            let s = match n {
                Norm::Sv => "‖∂M‖ ≤ (n+1)·‖M,∂M‖",
                Norm::Isv => "‖∂M‖_Z ≤ (n+1)·‖M,∂M‖_Z",
                Norm::Sisv => "‖∂M‖_Z^∞ ≤ (n+1)·‖M,∂M‖_Z^∞",
            };
            e.upper(b, n, v, vec![hi(i, n)], s);
        }
    }
}

fn bdry_est(c: &Ctx, i: usize, e: &mut Emit) {
    if !(c.bounded(i) && c.basic(i)) {
        return;
    }
    let inv = Q::new(1.into(), (c.d(i).dim as i64 + 1).into());
    let parts = c.boundary(i);
    for n in Norm::ALL {
        if n == Norm::Sisv && parts.len() != 1 {
            continue;
        }
        let sum = parts.iter().fold(Lower::zero(), |acc, &b| acc.add(&c.iv(b, n).lo));
        let inputs: BTreeSet<Fact> = parts.iter().map(|&b| lo(b, n)).collect();
        let s = match n {
            Norm::Sv => "‖M,∂M‖ ≥ ‖∂M‖/(n+1)",
            Norm::Isv => "‖M,∂M‖_Z ≥ ‖∂M‖_Z/(n+1)",
            Norm::Sisv => "‖M,∂M‖_Z^∞ ≥ ‖∂M‖_Z^∞/(n+1)",
        };
        e.lower(i, n, sum.scale(&inv), inputs.into_iter().collect(), s);
    }
}

fn product_bounds(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Product(fs)) = &c.node(i).link else {
        return;
    };
    if fs.len() != 2 || !c.basic(i) {
        return;
    }
    let (a, b) = if c.closed(fs[0]) {
        (fs[0], fs[1])
    } else {
        (fs[1], fs[0])
    };
    if !(c.closed(a) && c.basic(a) && c.basic(b) && c.d(b).closed.is_some()) {
        return;
    }
    let (m, k) = (c.d(a).dim as u64, c.d(b).dim as u64);
    let (ia, ib) = (c.iv(a, Norm::Sv), c.iv(b, Norm::Sv));
    e.lower(
        i,
        Norm::Sv,
        ia.lo.mul(&ib.lo),
        vec![lo(a, Norm::Sv), lo(b, Norm::Sv)],
        "‖M×N,∂‖ ≥ ‖M‖·‖N,∂N‖",
    );
    let cst = rational::binomial(m + k, m);
    e.upper(
        i,
        Norm::Sv,
        upper_scale(&upper_mul(&ia.hi, &ib.hi), &cst),
        vec![hi(a, Norm::Sv), hi(b, Norm::Sv)],
        format!("‖M×N,∂‖ ≤ C({},{m})·‖M‖·‖N,∂N‖", m + k),
    );
}

fn product_chi(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Product(fs)) = &c.node(i).link else {
        return;
    };
    let all = |g: &dyn Fn(usize) -> Option<i64>| fs.iter().map(|&f| g(f)).product::<Option<i64>>();
    e.int(
        chi(i),
        all(&|f| c.chi(f)),
        fs.iter().map(|&f| chi(f)).collect(),
        "χ(M×N) = χ(M)·χ(N)",
    );
    e.int(
        chi_rel(i),
        all(&|f| c.chi_rel(f)),
        fs.iter().map(|&f| chi_rel(f)).collect(),
        "χ(M×N,∂) = χ(M,∂M)·χ(N,∂N)",
    );
}

fn connsum(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::ConnectedSum(a, b)) = c.node(i).link else {
        return;
    };
    let n = c.d(i).dim;
    let sphere = if n.is_multiple_of(2) { 2 } else { 0 };
    if let (Some(x), Some(y)) = (c.chi(a), c.chi(b)) {
        e.int(
            chi(i),
            Some(x + y - sphere),
            vec![chi(a), chi(b)],
            "χ(M#N) = χ(M) + χ(N) − χ(Sⁿ)",
        );
    }
    if n >= 3 && [a, b].iter().all(|&f| c.closed(f) && c.basic(f)) {
        let (ia, ib) = (c.iv(a, Norm::Sv), c.iv(b, Norm::Sv));
        let s = "‖M#N‖ = ‖M‖ + ‖N‖ for n ≥ 3";
        e.lower(
            i,
            Norm::Sv,
            ia.lo.add(&ib.lo),
            vec![lo(a, Norm::Sv), lo(b, Norm::Sv)],
            s,
        );
        e.upper(
            i,
            Norm::Sv,
            upper_add(&ia.hi, &ib.hi),
            vec![hi(a, Norm::Sv), hi(b, Norm::Sv)],
            s,
        );
    }
}

/// The manifold glued at each pair, read off the first port.
fn glued(c: &Ctx, pieces: &[usize], pairs: &[(super::Port, super::Port)]) -> Vec<usize> {
    pairs
        .iter()
        .map(|(p, _)| c.boundary(pieces[p.piece])[p.component])
        .collect()
}

fn glue_chi(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Glue { pieces, pairs }) = &c.node(i).link else {
        return;
    };
    let seams = glued(c, pieces, pairs);
    let seam_chi: Option<i64> = seams.iter().map(|&s| c.chi(s)).sum();
    let seam_facts = || seams.iter().map(|&s| chi(s));
    let pieces_chi: Option<i64> = pieces.iter().map(|&p| c.chi(p)).sum();
    if let (Some(a), Some(b)) = (pieces_chi, seam_chi) {
        let inputs = pieces.iter().map(|&p| chi(p)).chain(seam_facts()).collect();
        e.int(chi(i), Some(a - b), inputs, "χ(Z) = Σχ(Mᵢ) − Σχ(Sⱼ)");
    }
    let pieces_rel: Option<i64> = pieces.iter().map(|&p| c.chi_rel(p)).sum();
    if let (Some(a), Some(b)) = (pieces_rel, seam_chi) {
        let inputs = pieces.iter().map(|&p| chi_rel(p)).chain(seam_facts()).collect();
        e.int(chi_rel(i), Some(a + b), inputs, "χ(Z,∂Z) = Σχ(Mᵢ,∂Mᵢ) + Σχ(Sⱼ)");
    }
    // Two pieces where one is glued along its whole boundary to the other.
    if pieces.len() != 2 || pairs.is_empty() || pairs.iter().any(|(p, r)| p.piece == r.piece) {
        return;
    }
    for (x, y) in [(0, 1), (1, 0)] {
        let ports = pairs.iter().flat_map(|(p, r)| [p, r]).filter(|p| p.piece == y).count();
        if ports != c.boundary(pieces[y]).len() {
            continue;
        }
        let (a, b) = (pieces[x], pieces[y]);
        if let (Some(u), Some(v)) = (c.chi(a), c.chi_rel(b)) {
            e.int(
                chi(i),
                Some(u + v),
                vec![chi(a), chi_rel(b)],
                "∂B glued to A ⇒ χ(A ∪ B) = χ(A) + χ(B,∂B)",
            );
        }
    }
}

fn sums(c: &Ctx, i: usize, parts: &[usize], n: Norm, lower: bool, e: &mut Emit, s: &'static str) {
    if lower {
        let v = parts.iter().fold(Lower::zero(), |acc, &p| acc.add(&c.iv(p, n).lo));
        let inputs: BTreeSet<Fact> = parts.iter().map(|&p| lo(p, n)).collect();
        e.lower(i, n, v, inputs.into_iter().collect(), s);
    } else {
        let v = parts
            .iter()
            .try_fold(Q::zero(), |acc, &p| c.iv(p, n).hi.as_ref().map(|h| acc + h));
        let inputs: BTreeSet<Fact> = parts.iter().map(|&p| hi(p, n)).collect();
        e.upper(i, n, v, inputs.into_iter().collect(), s);
    }
}

fn disjoint(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Glue { pieces, pairs }) = &c.node(i).link else {
        return;
    };
    if !pairs.is_empty() || !pieces.iter().all(|&p| yes(c.d(p).oriented)) {
        return;
    }
    for (n, s) in [
        (Norm::Sv, "‖M ⊔ N‖ = ‖M‖ + ‖N‖"),
        (Norm::Isv, "‖M ⊔ N‖_Z = ‖M‖_Z + ‖N‖_Z"),
    ] {
        sums(c, i, pieces, n, true, e, s);
        sums(c, i, pieces, n, false, e, s);
    }
}

/// Pieces may be disconnected; the glueing formulas hold componentwise.
fn amenable_seams(c: &Ctx, pieces: &[usize]) -> bool {
    pieces
        .iter()
        .all(|&p| yes(c.d(p).oriented) && c.boundary(p).iter().all(|&b| yes(c.d(b).amenable)))
}

fn glue_subadd(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Glue { pieces, pairs }) = &c.node(i).link else {
        return;
    };
    if !pairs.is_empty() && amenable_seams(c, pieces) {
        sums(
            c,
            i,
            pieces,
            Norm::Sv,
            false,
            e,
            "amenable boundary ⇒ ‖Z,∂Z‖ ≤ Σ‖Mᵢ,∂Mᵢ‖",
        );
    }
}

fn glue_add(c: &Ctx, i: usize, e: &mut Emit) {
    match &c.node(i).link {
        Some(Link::Glue { pieces, pairs }) if !pairs.is_empty() => {
            let injective = pairs.iter().flat_map(|(p, r)| [p, r]).all(|p| {
                let d = c.d(pieces[p.piece]);
                yes(d.boundary[p.component].pi1_injective)
            });
            if injective && amenable_seams(c, pieces) {
                sums(
                    c,
                    i,
                    pieces,
                    Norm::Sv,
                    true,
                    e,
                    "amenable π₁-injective seams ⇒ ‖Z,∂Z‖ ≥ Σ‖Mᵢ,∂Mᵢ‖",
                );
            }
        }
        Some(Link::Double(m)) => {
            let m = *m;
            let injective = c.d(m).boundary.iter().all(|r| yes(r.pi1_injective));
            if c.bounded(m) && injective && amenable_seams(c, &[m]) {
                let v = c.iv(m, Norm::Sv).lo.scale(&q(2));
                e.lower(
                    i,
                    Norm::Sv,
                    v,
                    vec![lo(m, Norm::Sv)],
                    "amenable π₁-injective ∂M ⇒ ‖D(M)‖ = 2·‖M,∂M‖",
                );
            }
        }
        _ => {}
    }
}

fn double(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Double(m)) = c.node(i).link else { return };
    if let (Some(a), Some(b)) = (c.chi(m), c.chi_rel(m)) {
        e.int(
            chi(i),
            Some(a + b),
            vec![chi(m), chi_rel(m)],
            "χ(D(M)) = χ(M) + χ(M,∂M)",
        );
    }
    if c.basic(m) {
        e.upper(
            i,
            Norm::Sv,
            upper_scale(&c.iv(m, Norm::Sv).hi, &q(2)),
            vec![hi(m, Norm::Sv)],
            "‖D(M)‖ ≤ 2·‖M,∂M‖",
        );
        e.upper(
            i,
            Norm::Isv,
            upper_scale(&c.iv(m, Norm::Isv).hi, &q(2)),
            vec![hi(m, Norm::Isv)],
            "‖D(M)‖_Z ≤ 2·‖M,∂M‖_Z",
        );
    }
}

fn stable_double(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Double(m)) = c.node(i).link else { return };
    if c.basic(m) {
        e.upper(
            i,
            Norm::Sisv,
            upper_scale(&c.iv(m, Norm::Sisv).hi, &q(2)),
            vec![hi(m, Norm::Sisv)],
            "‖D(M)‖_Z^∞ ≤ 2·‖M,∂M‖_Z^∞",
        );
    }
}

fn cover(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Cover { base, degree }) = c.node(i).link else {
        return;
    };
    if !(c.basic(i) && c.basic(base) && c.d(i).closed.is_some() && c.d(i).closed == c.d(base).closed) {
        return;
    }
    let d = degree as i64;
    let dq = q(d);
    let inv = Q::new(1.into(), d.into());
    for (f, get) in [
        (chi as fn(usize) -> Fact, State::chi_of as fn(&State) -> Option<i64>),
        (chi_rel, State::chi_rel_of),
    ] {
        let name = if f(0).quantity == Quantity::Chi { "χ" } else { "χ_rel" };
        e.int(
            f(i),
            get(&c.states[base]).map(|x| x * d),
            vec![f(base)],
            format!("{name}(N) = d·{name}(M), d = {d}"),
        );
        if let Some(x) = get(&c.states[i]).filter(|x| x % d == 0) {
            e.int(
                f(base),
                Some(x / d),
                vec![f(i)],
                format!("{name}(M) = {name}(N)/d, d = {d}"),
            );
        }
    }
    let (ni, nb) = (c.iv(i, Norm::Sv), c.iv(base, Norm::Sv));
    let s = format!("‖N‖ = d·‖M‖, d = {d}");
    e.lower(i, Norm::Sv, nb.lo.scale(&dq), vec![lo(base, Norm::Sv)], s.clone());
    e.upper(
        i,
        Norm::Sv,
        upper_scale(&nb.hi, &dq),
        vec![hi(base, Norm::Sv)],
        s.clone(),
    );
    e.lower(base, Norm::Sv, ni.lo.scale(&inv), vec![lo(i, Norm::Sv)], s.clone());
    e.upper(base, Norm::Sv, upper_scale(&ni.hi, &inv), vec![hi(i, Norm::Sv)], s);
    e.upper(
        base,
        Norm::Sisv,
        upper_scale(&c.iv(i, Norm::Isv).hi, &inv),
        vec![hi(i, Norm::Isv)],
        format!("‖M‖_Z^∞ ≤ ‖N‖_Z/d, d = {d}"),
    );
    e.upper(
        base,
        Norm::Sisv,
        upper_scale(&c.iv(i, Norm::Sisv).hi, &inv),
        vec![hi(i, Norm::Sisv)],
        format!("‖M‖_Z^∞ ≤ ‖N‖_Z^∞/d, d = {d}"),
    );
}

fn orientation(c: &Ctx, i: usize, e: &mut Emit) {
    let Some(Link::Reversed(m)) = c.node(i).link else {
        return;
    };
    for (a, b) in [(i, m), (m, i)] {
        for n in Norm::ALL {
            e.lower(a, n, c.iv(b, n).lo.clone(), vec![lo(b, n)], "‖−M‖ = ‖M‖");
            e.upper(a, n, c.iv(b, n).hi.clone(), vec![hi(b, n)], "‖−M‖ = ‖M‖");
        }
        e.int(chi(a), c.chi(b), vec![chi(b)], "χ(−M) = χ(M)");
        e.int(chi_rel(a), c.chi_rel(b), vec![chi_rel(b)], "χ(−M,∂) = χ(M,∂M)");
    }
}

fn chi_over(c: &Ctx, i: usize) -> Option<Lower> {
    let x = c.chi_rel(i)?;
    Some(Lower::at(Q::new(x.abs().into(), (c.d(i).dim as i64 + 1).into())))
}

fn betti(c: &Ctx, i: usize, e: &mut Emit) {
    if !c.basic(i) || c.d(i).closed.is_none() {
        return;
    }
    e.lower(i, Norm::Isv, Lower::at(q(1)), vec![], "b₀(M) = 1 ≤ ‖M,∂M‖_Z");
    if let Some(b) = c.states[i].betti.as_ref().and_then(|b| b.iter().max()) {
        e.lower(
            i,
            Norm::Isv,
            Lower::at(q(*b as i64)),
            vec![],
            format!("max_k b_k(M) = {b} ≤ ‖M,∂M‖_Z"),
        );
    }
    if let Some(v) = chi_over(c, i) {
        e.lower(i, Norm::Isv, v, vec![chi_rel(i)], "|χ(M,∂M)| ≤ (n+1)·‖M,∂M‖_Z");
    }
}

fn chi_stable(c: &Ctx, i: usize, e: &mut Emit) {
    if !c.basic(i) || c.d(i).closed.is_none() {
        return;
    }
    if let Some(v) = chi_over(c, i) {
        e.lower(i, Norm::Sisv, v, vec![chi_rel(i)], "|χ(M,∂M)| ≤ (n+1)·‖M,∂M‖_Z^∞");
    }
}

fn integral_ge_real(c: &Ctx, i: usize, e: &mut Emit) {
    if !c.basic(i) || c.d(i).closed.is_none() {
        return;
    }
    let (sv, sisv, isv) = (c.iv(i, Norm::Sv), c.iv(i, Norm::Sisv), c.iv(i, Norm::Isv));
    e.lower(
        i,
        Norm::Sisv,
        sv.lo.clone(),
        vec![lo(i, Norm::Sv)],
        "‖M,∂M‖ ≤ ‖M,∂M‖_Z^∞",
    );
    e.lower(
        i,
        Norm::Isv,
        sisv.lo.clone(),
        vec![lo(i, Norm::Sisv)],
        "‖M,∂M‖_Z^∞ ≤ ‖M,∂M‖_Z",
    );
    e.upper(
        i,
        Norm::Sisv,
        isv.hi.clone(),
        vec![hi(i, Norm::Isv)],
        "‖M,∂M‖_Z^∞ ≤ ‖M,∂M‖_Z",
    );
    e.upper(
        i,
        Norm::Sv,
        sisv.hi.clone(),
        vec![hi(i, Norm::Sisv)],
        "‖M,∂M‖ ≤ ‖M,∂M‖_Z^∞",
    );
}

/// Why the stable integral and the real norm agree on `i`, if known.
fn sisv_reason(c: &Ctx, i: usize) -> Option<(String, Vec<Fact>)> {
    let d = c.d(i);
    if !(c.basic(i) && yes(d.aspherical) && d.closed.is_some()) {
        return None;
    }
    let closed = c.closed(i);
    // With boundary, only π₁-injective boundaries: D² has ‖D²,∂‖ = 0 but
    // χ(D²,∂D²) = 1 forces a positive stable integral norm.
    if !closed && !d.boundary.iter().all(|r| yes(r.pi1_injective)) {
        return None;
    }
    let rf = yes(d.residually_finite);
    let n = d.dim;
    if n == 2 {
        return Some(("M aspherical surface ⇒ ‖M,∂M‖_Z^∞ = ‖M,∂M‖".into(), vec![]));
    }
    if n == 3 {
        if closed {
            return Some(("M closed aspherical 3-manifold ⇒ ‖M‖_Z^∞ = ‖M‖".into(), vec![]));
        }
        let tori = c
            .boundary(i)
            .iter()
            .all(|&b| c.basic(b) && c.closed(b) && c.chi(b) == Some(0));
        if tori {
            let inputs: BTreeSet<Fact> = c.boundary(i).iter().map(|&b| chi(b)).collect();
            return Some((
                "M aspherical 3-manifold, ∂M a union of tori ⇒ ‖M,∂M‖_Z^∞ = ‖M,∂M‖".into(),
                inputs.into_iter().collect(),
            ));
        }
    }
    if !rf {
        return None;
    }
    let with = |s: &str| {
        Some((
            format!("M aspherical, π₁(M) residually finite, {s} ⇒ ‖M,∂M‖_Z^∞ = ‖M,∂M‖"),
            vec![],
        ))
    };
    if closed && yes(d.graph_manifold) {
        return with("graph manifold");
    }
    if closed && yes(d.amenable) {
        return with("π₁(M) amenable");
    }
    if yes(d.s1_action) {
        return with("non-trivial S¹-action");
    }
    if yes(d.f_structure) {
        return with("F-structure");
    }
    if closed && amcat_bound(c, i).is_some() {
        return with("amcat(M) ≤ n");
    }
    if let (true, Some((f, b))) = (closed, c.node(i).fibre) {
        let base = c.d(b).dim as u64;
        if c.d(f).amcat_upper.is_some_and(|a| a * (base + 1) <= n as u64) {
            return with("fibre with amcat(N)·(dim B + 1) ≤ n");
        }
    }
    None
}

fn sisv_equal(c: &Ctx, i: usize, e: &mut Emit) {
    let Some((s, extra)) = sisv_reason(c, i) else { return };
    let (sv, sisv) = (c.iv(i, Norm::Sv), c.iv(i, Norm::Sisv));
    let with = |f: Fact| std::iter::once(f).chain(extra.iter().copied()).collect::<Vec<_>>();
    e.upper(i, Norm::Sisv, sv.hi.clone(), with(hi(i, Norm::Sv)), s.clone());
    e.lower(i, Norm::Sv, sisv.lo.clone(), with(lo(i, Norm::Sisv)), s);
}

fn positive(c: &Ctx, i: usize, e: &mut Emit) {
    let d = c.d(i);
    if !c.basic(i) || d.dim < 2 {
        return;
    }
    let reason = if c.closed(i) {
        if yes(d.hyperbolic) {
            Some("M closed hyperbolic ⇒ ‖M‖ > 0")
        } else if yes(d.negative_curvature) {
            Some("M closed, negative sectional curvature ⇒ ‖M‖ > 0")
        } else if yes(d.locally_symmetric) {
            Some("M closed locally symmetric of non-compact type ⇒ ‖M‖ > 0")
        } else if yes(d.hyperbolic_group) && yes(d.aspherical) {
            Some("M aspherical, π₁(M) non-elementary (relatively) hyperbolic, n ≥ 2 ⇒ ‖M‖ > 0")
        } else {
            None
        }
    } else if c.bounded(i) && yes(d.hyperbolic) {
        Some("interior of M complete hyperbolic of finite volume ⇒ ‖M,∂M‖ > 0")
    } else {
        None
    };
    if let Some(s) = reason {
        e.lower(i, Norm::Sv, Lower::positive(), vec![], s);
    }
}

fn chi_rel_rule(c: &Ctx, i: usize, e: &mut Emit) {
    if c.closed(i) {
        e.int(chi_rel(i), c.chi(i), vec![chi(i)], "∂M = ∅ ⇒ χ(M,∂M) = χ(M)");
        e.int(chi(i), c.chi_rel(i), vec![chi_rel(i)], "∂M = ∅ ⇒ χ(M) = χ(M,∂M)");
        return;
    }
    if !c.bounded(i) {
        return;
    }
    let parts = c.boundary(i);
    let bd: Option<i64> = parts.iter().map(|&b| c.chi(b)).sum();
    let bd_facts = || parts.iter().map(|&b| chi(b)).collect::<BTreeSet<_>>();
    if let Some(s) = bd {
        if let Some(x) = c.chi(i) {
            let inputs = bd_facts().into_iter().chain([chi(i)]).collect();
            e.int(chi_rel(i), Some(x - s), inputs, "χ(M,∂M) = χ(M) − χ(∂M)");
        }
        if let Some(x) = c.chi_rel(i) {
            let inputs = bd_facts().into_iter().chain([chi_rel(i)]).collect();
            e.int(chi(i), Some(x + s), inputs, "χ(M) = χ(M,∂M) + χ(∂M)");
        }
        return;
    }
    // One unknown boundary label, possibly repeated.
    let (Some(x), Some(r)) = (c.chi(i), c.chi_rel(i)) else {
        return;
    };
    let unknown: BTreeSet<usize> = parts.iter().copied().filter(|&b| c.chi(b).is_none()).collect();
    if unknown.len() != 1 {
        return;
    }
    let u = *unknown.iter().next().unwrap();
    let k = parts.iter().filter(|&&b| b == u).count() as i64;
    let known: i64 = parts.iter().filter_map(|&b| c.chi(b)).sum();
    let rest = x - r - known;
    if rest % k == 0 {
        let inputs = bd_facts()
            .into_iter()
            .filter(|f| f.manifold != u)
            .chain([chi(i), chi_rel(i)])
            .collect();
        e.int(chi(u), Some(rest / k), inputs, "χ(∂M) = χ(M) − χ(M,∂M)");
    }
}

fn chi_odd(c: &Ctx, i: usize, e: &mut Emit) {
    if c.closed(i) && c.d(i).dim % 2 == 1 {
        e.int(chi(i), Some(0), vec![], "M closed, n odd ⇒ χ(M) = 0");
    }
}

fn chi_parity(c: &Ctx, i: usize, e: &mut Emit) {
    if !c.bounded(i) {
        return;
    }
    if c.d(i).dim.is_multiple_of(2) {
        e.int(chi_rel(i), c.chi(i), vec![chi(i)], "n even ⇒ χ(M,∂M) = χ(M)");
        e.int(chi(i), c.chi_rel(i), vec![chi_rel(i)], "n even ⇒ χ(M) = χ(M,∂M)");
        return;
    }
    e.int(
        chi_rel(i),
        c.chi(i).map(|x| -x),
        vec![chi(i)],
        "n odd ⇒ χ(M,∂M) = −χ(M)",
    );
    e.int(
        chi(i),
        c.chi_rel(i).map(|x| -x),
        vec![chi_rel(i)],
        "n odd ⇒ χ(M) = −χ(M,∂M)",
    );
    if let [b] = *c.boundary(i) {
        e.int(chi(b), c.chi(i).map(|x| 2 * x), vec![chi(i)], "n odd ⇒ χ(∂M) = 2·χ(M)");
        if let Some(y) = c.chi(b).filter(|y| y % 2 == 0) {
            e.int(chi(i), Some(y / 2), vec![chi(b)], "n odd ⇒ χ(M) = χ(∂M)/2");
        }
    }
}

impl State {
    fn chi_of(&self) -> Option<i64> {
        self.chi
    }

    fn chi_rel_of(&self) -> Option<i64> {
        self.chi_rel
    }
}
