//! Combinatorial constructions of manifolds with exact χ bookkeeping.

mod cover;
mod glue;
mod product;

use std::collections::BTreeMap;

use thiserror::Error;

pub use cover::{cyclic_cover, Cocycle, Cover, CoverDoc, CoverSpec};
pub use glue::{connected_sum, double, find_reversing_iso, glue, Double, Glued, GlueingDoc, GlueingSpec, Side};
pub use product::{cross, product, Product};

use crate::chain::Chain;
use crate::complex::{Complex, ComplexError, Simplex};
use crate::manifold::ManifoldError;
use crate::subdivision::{barycentric_subdivide, Subdivision};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{side} boundary component {index} out of range ({count} components)")]
    ComponentOutOfRange {
        side: &'static str,
        index: usize,
        count: usize,
    },
    #[error("self-glueing needs two distinct boundary components")]
    SameComponent,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("vertex bijection is not a simplicial isomorphism: {0}")]
    NotSimplicial(String),
    #[error("vertex bijection does not reverse the induced boundary orientations")]
    NotOrientationReversing,
    #[error("no orientation-reversing simplicial isomorphism between the boundary components")]
    NoIsomorphism,
    #[error("identification does not yield a simplicial complex even after subdivision")]
    QuotientNotSimplicial,
    #[error("input `{0}` is closed; a non-empty boundary is required")]
    Closed(String),
    #[error("input `{0}` must be closed")]
    NotClosed(String),
    #[error("input `{0}` must be connected")]
    Disconnected(String),
    #[error("dimension {0} too small (need at least {1})")]
    DimensionTooSmall(usize, usize),
    #[error("facet index {0} out of range ({1} facets)")]
    FacetOutOfRange(usize, usize),
    #[error("cocycle condition fails on triangle {0:?} modulo {1}")]
    CocycleViolation(Vec<usize>, usize),
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("unknown input `{0}`")]
    UnknownInput(String),
    #[error("identity check failed: {0}")]
    Identity(String),
}

/// Disjoint union; vertices of `b` are shifted past those of `a`.
pub fn disjoint_union(name: &str, a: &Complex, b: &Complex) -> Result<Complex, ConstructionError> {
    if a.dim() != b.dim() {
        return Err(ConstructionError::DimensionMismatch(a.dim(), b.dim()));
    }
    let off = a.vertex_count();
    let facets = a
        .facets()
        .iter()
        .cloned()
        .chain(b.facets().iter().map(|f| f.iter().map(|v| v + off).collect()))
        .collect();
    Ok(Complex::new(name, a.dim(), off + b.vertex_count(), facets)?)
}

/// Result of identifying vertices of a complex, possibly after one
/// barycentric subdivision.
#[derive(Clone, Debug)]
pub(crate) struct Quotient {
    pub complex: Complex,
    sd: Option<Subdivision>,
    vertex_map: Vec<usize>,
}

impl Quotient {
    /// Pushes a chain on the source complex to the quotient.
    pub fn push(&self, c: &Chain) -> Result<Chain, ComplexError> {
        let c = match &self.sd {
            Some(sd) => sd.map_chain(c)?,
            None => c.clone(),
        };
        Ok(c.map_vertices(|v| self.vertex_map[v]))
    }

    pub fn subdivided(&self) -> bool {
        self.sd.is_some()
    }
}

/// Identifies `v ~ pairs[v]`. `glued` lists the subcomplexes whose
/// simplices disappear into their partners; the quotient is accepted only
/// when no other simplices get identified.
fn identify_once(
    name: &str,
    source: &Complex,
    pairs: &BTreeMap<usize, usize>,
    glued: &[Complex],
) -> Option<(Complex, Vec<usize>)> {
    let rep = |v: usize| *pairs.get(&v).unwrap_or(&v);
    let mut reps: Vec<usize> = (0..source.vertex_count()).map(rep).collect();
    let mut order = reps.clone();
    order.sort_unstable();
    order.dedup();
    for r in reps.iter_mut() {
        *r = order.binary_search(r).expect("present");
    }
    let facets: Vec<Vec<usize>> = source
        .facets()
        .iter()
        .map(|f| f.iter().map(|&v| reps[v]).collect())
        .collect();
    let q = Complex::new(name, source.dim(), order.len(), facets).ok()?;
    for k in 0..=source.dim() {
        let lost: usize = glued.iter().map(|g| g.count(k)).sum();
        if q.count(k) + lost != source.count(k) {
            return None;
        }
    }
    Some((q, reps))
}

/// Identification with a single barycentric-subdivision fallback when the
/// naive quotient would merge simplices that are not glued.
pub(crate) fn identify(
    name: &str,
    source: &Complex,
    pairs: &BTreeMap<usize, usize>,
    glued: &[Complex],
) -> Result<Quotient, ConstructionError> {
    if let Some((complex, vertex_map)) = identify_once(name, source, pairs, glued) {
        return Ok(Quotient {
            complex,
            sd: None,
            vertex_map,
        });
    }
    let sd = barycentric_subdivide(source);
    let mut sd_pairs = BTreeMap::new();
    let mut sd_glued = Vec::new();
    for g in glued {
        for k in 0..=g.dim() {
            for s in g.simplices(k) {
                let image: Vec<usize> = s.vertices().iter().map(|v| pairs[v]).collect();
                let (t, _) = Simplex::from_ordered(&image)
                    .ok_or_else(|| ConstructionError::NotSimplicial(format!("{s} collapses")))?;
                let from = sd.barycenter(s).expect("glued simplex in source");
                let to = sd
                    .barycenter(&t)
                    .ok_or_else(|| ConstructionError::NotSimplicial(format!("{t} missing")))?;
                sd_pairs.insert(from, to);
            }
        }
        sd_glued.push(sd.subcomplex(g)?);
    }
    let (complex, vertex_map) =
        identify_once(name, &sd.complex, &sd_pairs, &sd_glued).ok_or(ConstructionError::QuotientNotSimplicial)?;
    Ok(Quotient {
        complex,
        sd: Some(sd),
        vertex_map,
    })
}
