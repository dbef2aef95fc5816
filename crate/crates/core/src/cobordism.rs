//! Oriented cobordisms over registry labels: composition by glueing,
//! disjoint union, the Euler characteristic and simplicial volume functors,
//! Reinhart bordism classes in low dimensions and the connected sum monoid.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::inference::yes;
use crate::inference::{
    BoundaryRef, Construction, Description, Handle, InferenceError, Interval, Norm, Port, Registry,
};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("object mismatch: outgoing {outgoing} but incoming {incoming}")]
    ObjectMismatch { outgoing: CobObject, incoming: CobObject },
    #[error("`{0}` is not an object: {1}")]
    NotObject(String, String),
    #[error("`{0}` is not a cobordism: {1}")]
    Malformed(String, String),
    #[error("`{0}` is not in the amenable cobordism category: {1}")]
    NotMember(String, String),
    #[error("χ({0}) is unknown")]
    UnknownChi(String),
    #[error("Reinhart classes are only computed in dimensions ≤ 4, not {0}")]
    UnsupportedDimension(usize),
    #[error("`{0}` needs a declared signature")]
    MissingSignature(String),
    #[error("`{0}`: χ = {1} and σ = {2} have different parity")]
    Parity(String, i64, i64),
    #[error("`{0}`: the number of components is unknown")]
    UnknownComponents(String),
    #[error("`{0}` must be closed and oriented of dimension {1}")]
    NotClosed(String, String),
    #[error("‖{0}‖ = {1} is not known to be positive")]
    NotPositive(String, Box<Interval>),
    #[error("connected sums are only additive in dimension ≥ 3, not {0}")]
    LowDimension(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// All oriented cobordisms.
    Oriented,
    /// Amenable objects, π₁-injective boundary inclusions.
    Amenable,
}

/// A closed oriented `(d−1)`-manifold, as a list of component labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CobObject {
    pub labels: Vec<String>,
}

impl CobObject {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> CobObject {
        CobObject {
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn empty() -> CobObject {
        CobObject::default()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Checks that every component is closed, oriented and of dimension
    /// `dim`, and amenable when `category` asks for it.
    pub fn check(&self, reg: &Registry, dim: usize, category: Category) -> Result<(), CobordismError> {
        for l in &self.labels {
            let d = reg.description(reg.handle(l)?);
            let fail = |m: &str| CobordismError::NotObject(l.clone(), m.to_string());
            if d.dim != dim {
                return Err(fail(&format!("dimension {} instead of {dim}", d.dim)));
            }
            if d.closed != Some(true) || !yes(d.oriented) {
                return Err(fail("not closed and oriented"));
            }
            if category == Category::Amenable && !yes(d.amenable) {
                return Err(CobordismError::NotMember(l.clone(), "π₁ not declared amenable".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CobObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&self.labels.join(" ⊔ "))
        }
    }
}

/// `(W; M, N)`: incoming and outgoing components are positions in the
/// boundary list of `body`; together they use every component once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cobordism {
    pub body: String,
    pub incoming: Vec<usize>,
    pub outgoing: Vec<usize>,
    pub source: CobObject,
    pub target: CobObject,
}

impl Cobordism {
    pub fn new(
        reg: &Registry,
        body: &str,
        incoming: Vec<usize>,
        outgoing: Vec<usize>,
    ) -> Result<Cobordism, CobordismError> {
        let d = reg.description(reg.handle(body)?);
        let fail = |m: String| CobordismError::Malformed(body.to_string(), m);
        if !yes(d.oriented) {
            return Err(fail("not oriented".into()));
        }
        let n = d.boundary.len();
        let mut seen = BTreeSet::new();
        for &k in incoming.iter().chain(&outgoing) {
            if k >= n {
                return Err(fail(format!("no boundary component {k}")));
            }
            if !seen.insert(k) {
                return Err(fail(format!("boundary component {k} used twice")));
            }
        }
        if seen.len() != n {
            return Err(fail("incoming and outgoing do not exhaust the boundary".into()));
        }
        let object = |ks: &[usize]| CobObject::new(ks.iter().map(|&k| d.boundary[k].manifold.clone()));
        let (source, target) = (object(&incoming), object(&outgoing));
        let dim = d.dim.checked_sub(1).ok_or_else(|| fail("dimension 0".into()))?;
        source.check(reg, dim, Category::Oriented)?;
        target.check(reg, dim, Category::Oriented)?;
        Ok(Cobordism {
            body: body.to_string(),
            incoming,
            outgoing,
            source,
            target,
        })
    }

    pub fn dim(&self, reg: &Registry) -> Result<usize, CobordismError> {
        Ok(reg.description(reg.handle(&self.body)?).dim)
    }

    /// Membership in the amenable cobordism category.
    pub fn check_member(&self, reg: &Registry) -> Result<(), CobordismError> {
        let d = reg.description(reg.handle(&self.body)?);
        for (k, r) in d.boundary.iter().enumerate() {
            if !yes(r.pi1_injective) {
                return Err(CobordismError::NotMember(
                    self.body.clone(),
                    format!("boundary component {k} (`{}`) is not declared π₁-injective", r.manifold),
                ));
            }
        }
        let dim = d.dim - 1;
        self.source.check(reg, dim, Category::Amenable)?;
        self.target.check(reg, dim, Category::Amenable)
    }

    pub fn is_member(&self, reg: &Registry) -> bool {
        self.check_member(reg).is_ok()
    }
}

/// Positions of the unglued boundary components after a glue, in the order
/// the glued description lists them.
fn remaining_positions(
    reg: &Registry,
    pieces: &[&str],
    used: &BTreeSet<Port>,
) -> Result<Vec<Vec<Option<usize>>>, CobordismError> {
    let mut next = 0;
    let mut out = Vec::new();
    for (k, p) in pieces.iter().enumerate() {
        let n = reg.description(reg.handle(p)?).boundary.len();
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            if used.contains(&Port { piece: k, component: j }) {
                row.push(None);
            } else {
                row.push(Some(next));
                next += 1;
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// `g ∘ f`, glueing the outgoing boundary of `f` to the incoming boundary
/// of `g`. The body is registered under `name`.
pub fn compose(
    reg: &mut Registry,
    f: &Cobordism,
    g: &Cobordism,
    name: &str,
    category: Category,
) -> Result<Cobordism, CobordismError> {
    if f.target != g.source {
        return Err(CobordismError::ObjectMismatch {
            outgoing: f.target.clone(),
            incoming: g.source.clone(),
        });
    }
    if category == Category::Amenable {
        f.check_member(reg)?;
        g.check_member(reg)?;
    }
    let pairs: Vec<(Port, Port)> = f
        .outgoing
        .iter()
        .zip(&g.incoming)
        .map(|(&a, &b)| (Port { piece: 0, component: a }, Port { piece: 1, component: b }))
        .collect();
    let used: BTreeSet<Port> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let pos = remaining_positions(reg, &[&f.body, &g.body], &used)?;
    reg.add_construction(
        name,
        &Construction::Glue {
            pieces: vec![f.body.clone(), g.body.clone()],
            pairs,
            amenable: category == Category::Amenable,
        },
    )?;
    let incoming = f.incoming.iter().map(|&k| pos[0][k].expect("unglued")).collect();
    let outgoing = g.outgoing.iter().map(|&k| pos[1][k].expect("unglued")).collect();
    Cobordism::new(reg, name, incoming, outgoing)
}

/// `f ⊗ g`, the disjoint union.
pub fn tensor(reg: &mut Registry, f: &Cobordism, g: &Cobordism, name: &str) -> Result<Cobordism, CobordismError> {
    let shift = reg.description(reg.handle(&f.body)?).boundary.len();
    reg.add_construction(
        name,
        &Construction::Glue {
            pieces: vec![f.body.clone(), g.body.clone()],
            pairs: vec![],
            amenable: false,
        },
    )?;
    let join = |a: &[usize], b: &[usize]| a.iter().copied().chain(b.iter().map(|k| k + shift)).collect();
    Cobordism::new(
        reg,
        name,
        join(&f.incoming, &g.incoming),
        join(&f.outgoing, &g.outgoing),
    )
}

fn chi_of(reg: &Registry, label: &str) -> Result<i64, CobordismError> {
    reg.state(reg.handle(label)?)?
        .chi
        .ok_or_else(|| CobordismError::UnknownChi(label.to_string()))
}

/// `(W; M, N) ↦ χ(W, M) = χ(W) − χ(M)`.
pub fn chi_functor(reg: &Registry, f: &Cobordism) -> Result<i64, CobordismError> {
    let mut x = chi_of(reg, &f.body)?;
    for l in &f.source.labels {
        x -= chi_of(reg, l)?;
    }
    Ok(x)
}

/// `(W; M, N) ↦ ‖W, ∂W‖` on the amenable cobordism category. Anything
/// outside it is refused.
pub fn sv_functor(reg: &Registry, f: &Cobordism) -> Result<Interval, CobordismError> {
    f.check_member(reg)?;
    Ok(reg.interval(reg.handle(&f.body)?, Norm::Sv)?.clone())
}

/// A class in the Reinhart bordism group `𝔯_d`, in coordinates given by
/// complete invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "dim")]
pub enum ReinhartClass {
    /// `𝔯₀ ≅ ℤ ⊕ ℤ`: point count and signed point count.
    #[serde(rename = "0")]
    Points { count: i64, signed: i64 },
    /// `𝔯₁ ≅ ℤ/2`: number of circles mod 2.
    #[serde(rename = "1")]
    Circles { parity: u8 },
    /// `𝔯₂ ≅ ℤ`: `χ/2`.
    #[serde(rename = "2")]
    Surface { half_chi: i64 },
    /// `𝔯₃ = 0`.
    #[serde(rename = "3")]
    Trivial,
    /// `𝔯₄ ≅ ℤ ⊕ ℤ` as the pairs `(χ, σ)` with `χ ≡ σ mod 2`.
    #[serde(rename = "4")]
    Four { chi: i64, signature: i64 },
}

impl ReinhartClass {
    pub fn dim(&self) -> usize {
        match self {
            ReinhartClass::Points { .. } => 0,
            ReinhartClass::Circles { .. } => 1,
            ReinhartClass::Surface { .. } => 2,
            ReinhartClass::Trivial => 3,
            ReinhartClass::Four { .. } => 4,
        }
    }

    pub fn zero(d: usize) -> Option<ReinhartClass> {
        Some(match d {
            0 => ReinhartClass::Points { count: 0, signed: 0 },
            1 => ReinhartClass::Circles { parity: 0 },
            2 => ReinhartClass::Surface { half_chi: 0 },
            3 => ReinhartClass::Trivial,
            4 => ReinhartClass::Four { chi: 0, signature: 0 },
            _ => return None,
        })
    }

    /// The class of `Sᵈ`, the generator of the cyclic part.
    pub fn sphere(d: usize) -> Option<ReinhartClass> {
        Some(match d {
            0 => ReinhartClass::Points { count: 2, signed: 0 },
            1 => ReinhartClass::Circles { parity: 1 },
            2 => ReinhartClass::Surface { half_chi: 1 },
            3 => ReinhartClass::Trivial,
            4 => ReinhartClass::Four { chi: 2, signature: 0 },
            _ => return None,
        })
    }

    /// Disjoint union. `None` across dimensions.
    pub fn add(&self, other: &ReinhartClass) -> Option<ReinhartClass> {
        use ReinhartClass::*;
        Some(match (*self, *other) {
            (Points { count: a, signed: s }, Points { count: b, signed: t }) => Points {
                count: a + b,
                signed: s + t,
            },
            (Circles { parity: a }, Circles { parity: b }) => Circles { parity: (a + b) % 2 },
            (Surface { half_chi: a }, Surface { half_chi: b }) => Surface { half_chi: a + b },
            (Trivial, Trivial) => Trivial,
            (Four { chi: a, signature: s }, Four { chi: b, signature: t }) => Four {
                chi: a + b,
                signature: s + t,
            },
            _ => return None,
        })
    }

    /// The class of the orientation-reversed manifold.
    pub fn reversed(&self) -> ReinhartClass {
        match *self {
            ReinhartClass::Points { count, signed } => ReinhartClass::Points { count, signed: -signed },
            ReinhartClass::Four { chi, signature } => ReinhartClass::Four {
                chi,
                signature: -signature,
            },
            c => c,
        }
    }

    /// `k` with `self = k·[Sᵈ]`, if the class lies in the cyclic part.
    /// For `d = 1` the multiple is only defined mod 2.
    pub fn sphere_multiple(&self) -> Option<i64> {
        match *self {
            ReinhartClass::Points { count, signed: 0 } if count % 2 == 0 => Some(count / 2),
            ReinhartClass::Circles { parity } => Some(parity as i64),
            ReinhartClass::Surface { half_chi } => Some(half_chi),
            ReinhartClass::Trivial => Some(0),
            ReinhartClass::Four { chi, signature: 0 } if chi % 2 == 0 => Some(chi / 2),
            _ => None,
        }
    }

    /// The Euler characteristic, where the class determines it.
    pub fn chi(&self) -> Option<i64> {
        match *self {
            ReinhartClass::Points { count, .. } => Some(count),
            ReinhartClass::Surface { half_chi } => Some(2 * half_chi),
            ReinhartClass::Four { chi, .. } => Some(chi),
            ReinhartClass::Circles { .. } | ReinhartClass::Trivial => None,
        }
    }
}

impl fmt::Display for ReinhartClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReinhartClass::Points { count, signed } => write!(f, "({count}, {signed}) ∈ ℤ ⊕ ℤ"),
            ReinhartClass::Circles { parity } => write!(f, "{parity} ∈ ℤ/2"),
            ReinhartClass::Surface { half_chi } => write!(f, "{half_chi} ∈ ℤ"),
            ReinhartClass::Trivial => f.write_str("0"),
            ReinhartClass::Four { chi, signature } => write!(f, "(χ, σ) = ({chi}, {signature})"),
        }
    }
}

fn components(reg: &Registry, h: Handle) -> Option<i64> {
    let d = reg.description(h);
    if d.connected == Some(true) {
        return Some(1);
    }
    match &d.origin {
        Some(crate::inference::Origin::Glue { pieces, pairs }) if pairs.is_empty() => pieces
            .iter()
            .map(|p| reg.handle(p).ok().and_then(|h| components(reg, h)))
            .sum(),
        Some(crate::inference::Origin::Reversed { of }) => components(reg, reg.handle(of).ok()?),
        _ => None,
    }
}

fn closed_oriented(reg: &Registry, h: Handle) -> Result<&Description, CobordismError> {
    let d = reg.description(h);
    if d.closed != Some(true) || !yes(d.oriented) {
        return Err(CobordismError::NotClosed(d.name.clone(), d.dim.to_string()));
    }
    Ok(d)
}

/// The Reinhart bordism class of a closed oriented manifold of dimension
/// at most 4. The signature enters as declared (or through reversal,
/// disjoint unions and connected sums), never computed.
pub fn reinhart_class(reg: &Registry, name: &str) -> Result<ReinhartClass, CobordismError> {
    let h = reg.handle(name)?;
    let d = closed_oriented(reg, h)?;
    let chi = || {
        reg.state(h)
            .map_err(CobordismError::from)?
            .chi
            .ok_or_else(|| CobordismError::UnknownChi(name.to_string()))
    };
    let signature = || {
        reg.signature(h)
            .ok_or_else(|| CobordismError::MissingSignature(name.to_string()))
    };
    Ok(match d.dim {
        0 => ReinhartClass::Points {
            count: chi()?,
            signed: signature()?,
        },
        1 => {
            let n = components(reg, h).ok_or_else(|| CobordismError::UnknownComponents(name.to_string()))?;
            ReinhartClass::Circles {
                parity: n.rem_euclid(2) as u8,
            }
        }
        2 => ReinhartClass::Surface { half_chi: chi()? / 2 },
        3 => ReinhartClass::Trivial,
        4 => {
            let (x, s) = (chi()?, signature()?);
            if (x - s).rem_euclid(2) != 0 {
                return Err(CobordismError::Parity(name.to_string(), x, s));
            }
            ReinhartClass::Four { chi: x, signature: s }
        }
        n => return Err(CobordismError::UnsupportedDimension(n)),
    })
}

/// Why `‖·‖` on closed `d`-manifolds admits no extension to a functor on
/// the full oriented cobordism category, replayed on one manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub manifold: String,
    pub dim: usize,
    pub sv: Interval,
    /// `‖M ⊔ −M‖` forced by monoidality.
    pub monoidal: Interval,
    /// The value forced by bordism invariance.
    pub forced: String,
    /// `[M ⊔ −M]` in `𝔯_d`, when the dimension allows it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<ReinhartClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sphere_multiple: Option<i64>,
    pub steps: Vec<String>,
}

impl ObstructionWitness {
    pub fn render(&self) -> String {
        let mut out = format!("obstruction for {} (d = {})\n", self.manifold, self.dim);
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("  {}. {s}\n", k + 1));
        }
        out
    }
}

/// Replays the contradiction for a closed oriented manifold with positive
/// simplicial volume: an extension `F` would be a Reinhart bordism
/// invariant with `F(Sᵈ) = 0`, hence an oriented bordism invariant, so
/// `F(M ⊔ −M) = 0`, while monoidality gives `2·‖M‖ > 0`.
pub fn extension_obstruction(reg: &Registry, name: &str) -> Result<ObstructionWitness, CobordismError> {
    let h = reg.handle(name)?;
    let d = closed_oriented(reg, h)?;
    let n = d.dim;
    if n < 2 {
        return Err(CobordismError::NotClosed(name.to_string(), "≥ 2".into()));
    }
    let sv = reg.interval(h, Norm::Sv)?.clone();
    if !sv.is_positive() {
        return Err(CobordismError::NotPositive(name.to_string(), Box::new(sv)));
    }
    let two = Q::from_integer(2.into());
    let monoidal = sv.scale(&two);
    let chi = reg.state(h)?.chi;
    let mut steps = vec![
        format!("‖{name}‖ ∈ {sv}, strictly positive"),
        format!(
            "F(S^{n}) = ‖S^{n}‖ = 0, so F vanishes on the cyclic part ℤ/Eul_{} ⊂ 𝔯_{n}",
            n + 1
        ),
        format!("F factors through Ω_{n}^SO"),
    ];
    // [M ⊔ −M] = [M] + [M].reversed(); only χ enters.
    let class = match (n, chi) {
        (2, Some(x)) => Some(ReinhartClass::Surface { half_chi: x }),
        (3, _) => Some(ReinhartClass::Trivial),
        (4, Some(x)) => Some(ReinhartClass::Four {
            chi: 2 * x,
            signature: 0,
        }),
        _ => None,
    };
    let sphere_multiple = class.and_then(|c| c.sphere_multiple());
    match (class, sphere_multiple) {
        (Some(c), Some(k)) => {
            let x = chi.map_or("?".to_string(), |x| x.to_string());
            steps.push(format!("[{name} ⊔ −{name}] = {c} in 𝔯_{n}, χ({name}) = {x}"));
            steps.push(format!(
                "[S^{n}] = {}, so [{name} ⊔ −{name}] = {k}·[S^{n}]",
                ReinhartClass::sphere(n).expect("d ≤ 4")
            ));
            steps.push(format!("F({name} ⊔ −{name}) = {k}·F(S^{n}) = 0"));
        }
        _ => {
            steps.push(format!("{name} ⊔ −{name} = ∂({name} × [0,1]) is zero in Ω_{n}^SO"));
            steps.push(format!("F({name} ⊔ −{name}) = 0"));
        }
    }
    steps.push(format!(
        "monoidality: F({name} ⊔ −{name}) = ‖{name}‖ + ‖−{name}‖ = 2·‖{name}‖ ∈ {monoidal}"
    ));
    debug_assert!(!monoidal.contains(&Q::zero()));
    steps.push(format!("0 ∉ {monoidal}: contradiction"));
    Ok(ObstructionWitness {
        manifold: name.to_string(),
        dim: n,
        sv,
        monoidal,
        forced: "0".into(),
        class,
        sphere_multiple,
        steps,
    })
}

/// `S(M₁ # ⋯ # M_k) = Σ ‖Mᵢ‖` on the connected sum monoid in dimension
/// `n ≥ 3`. The empty word is the unit `Sⁿ`.
pub fn connsum_monoid_eval(reg: &Registry, word: &[&str], n: usize) -> Result<Interval, CobordismError> {
    if n < 3 {
        return Err(CobordismError::LowDimension(n));
    }
    let mut total = Interval::zero();
    for &l in word {
        let h = reg.handle(l)?;
        let d = closed_oriented(reg, h)?;
        if d.dim != n || !yes(d.connected) {
            return Err(CobordismError::NotClosed(l.to_string(), format!("{n}, connected")));
        }
        total = total.add(reg.interval(h, Norm::Sv)?);
    }
    Ok(total)
}

/// The oriented surface cobordism generators over one circle label.
#[derive(Clone, Debug)]
pub struct SurfaceGenerators {
    pub cap: Cobordism,
    pub cup: Cobordism,
    pub pants: Cobordism,
    pub copants: Cobordism,
    pub cylinder: Cobordism,
    pub cylinders: Cobordism,
    pub twist: Cobordism,
    pub handle: Cobordism,
}

impl SurfaceGenerators {
    pub fn all(&self) -> [(&'static str, &Cobordism); 8] {
        [
            ("cap", &self.cap),
            ("cup", &self.cup),
            ("pants", &self.pants),
            ("copants", &self.copants),
            ("cylinder", &self.cylinder),
            ("cylinder⊔cylinder", &self.cylinders),
            ("twist", &self.twist),
            ("handle", &self.handle),
        ]
    }
}

pub const CIRCLE: &str = "S1";

/// Registers a circle, a disk, a cylinder, a pair of pants and a torus
/// with two holes, and builds the generators from them. Declared χ values
/// are those of the standard models.
pub fn surface_generators(reg: &mut Registry) -> Result<SurfaceGenerators, CobordismError> {
    if !reg.contains(CIRCLE) {
        reg.add_manifold(Description {
            chi: Some(0),
            aspherical: Some(true),
            amenable: Some(true),
            ..Description::closed_manifold(CIRCLE, 1)
        })?;
    }
    let circles = |k: usize, injective: bool| {
        (0..k)
            .map(|_| BoundaryRef {
                pi1_injective: Some(injective),
                aspherical: Some(true),
                ..BoundaryRef::new(CIRCLE)
            })
            .collect::<Vec<_>>()
    };
    let surface = |name: &str, holes: usize, chi: i64, injective: bool| Description {
        chi: Some(chi),
        aspherical: Some(true),
        amenable: Some(chi >= 0),
        hyperbolic: Some(chi < 0),
        ..Description::bounded_manifold(name, 2, circles(holes, injective))
    };
    reg.add_manifold(surface("Disk", 1, 1, false))?;
    reg.add_manifold(surface("Cylinder", 2, 0, true))?;
    reg.add_manifold(surface("Pants", 3, -1, true))?;
    reg.add_manifold(surface("Handle", 2, -2, true))?;
    reg.add_construction("−Disk", &Construction::Reversed("Disk".into()))?;
    reg.add_construction("−Pants", &Construction::Reversed("Pants".into()))?;
    let cylinder = Cobordism::new(reg, "Cylinder", vec![0], vec![1])?;
    let cylinders = tensor(reg, &cylinder, &cylinder, "Cylinder ⊔ Cylinder")?;
    let mut twist = tensor(reg, &cylinder, &cylinder, "Twist")?;
    twist.outgoing.swap(0, 1);
    twist.target.labels.swap(0, 1);
    Ok(SurfaceGenerators {
        cap: Cobordism::new(reg, "Disk", vec![0], vec![])?,
        cup: Cobordism::new(reg, "−Disk", vec![], vec![0])?,
        pants: Cobordism::new(reg, "Pants", vec![0, 1], vec![2])?,
        copants: Cobordism::new(reg, "−Pants", vec![0], vec![1, 2])?,
        cylinder,
        cylinders,
        twist,
        handle: Cobordism::new(reg, "Handle", vec![0], vec![1])?,
    })
}

/// Whether `a ⊆ b`, or `a = b` when both are exact.
pub fn additive(composite: &Interval, sum: &Interval) -> bool {
    match (composite.exact_value(), sum.exact_value()) {
        (Some(a), Some(b)) => a == b,
        _ => composite.is_within(sum),
    }
}
