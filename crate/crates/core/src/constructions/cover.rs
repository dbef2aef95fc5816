use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::complex::Complex;
use crate::manifold::{manifold_check, ManifoldComplex};

/// An integer-valued antisymmetric edge function, read modulo the cover
/// degree. Edges missing from the table carry 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cocycle {
    values: BTreeMap<(usize, usize), i64>,
}

impl Cocycle {
    /// Entries for `(v, u)` with `u < v` are stored as `(u, v) ↦ −value`.
    pub fn new(values: impl IntoIterator<Item = ((usize, usize), i64)>) -> Cocycle {
        let mut out = BTreeMap::new();
        for ((u, v), x) in values {
            let (key, x) = if u <= v { ((u, v), x) } else { ((v, u), -x) };
            if x != 0 {
                out.insert(key, x);
            }
        }
        Cocycle { values: out }
    }

    pub fn value(&self, u: usize, v: usize) -> i64 {
        if u <= v {
            self.values.get(&(u, v)).copied().unwrap_or(0)
        } else {
            -self.values.get(&(v, u)).copied().unwrap_or(0)
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.values.iter().map(|(&(u, v), &x)| (u, v, x))
    }

    /// First triangle of `k` violating `c(u,v) + c(v,w) ≡ c(u,w) (mod d)`.
    pub fn check(&self, k: &Complex, d: usize) -> Result<(), ConstructionError> {
        let d = d as i64;
        for t in k.simplices(2) {
            let [u, v, w] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
            if (self.value(u, v) + self.value(v, w) - self.value(u, w)).rem_euclid(d) != 0 {
                return Err(ConstructionError::CocycleViolation(t.vertices().to_vec(), d as usize));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub base: ManifoldComplex,
    pub cocycle: Cocycle,
    pub degree: usize,
}

/// JSON sidecar form of a [`CoverSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub base: String,
    pub degree: usize,
    /// `[u, v, value]` triples.
    pub cocycle: Vec<(usize, usize, i64)>,
}

impl CoverDoc {
    pub fn resolve(&self, lookup: impl Fn(&str) -> Option<ManifoldComplex>) -> Result<CoverSpec, ConstructionError> {
        Ok(CoverSpec {
            base: lookup(&self.base).ok_or_else(|| ConstructionError::UnknownInput(self.base.clone()))?,
            cocycle: Cocycle::new(self.cocycle.iter().map(|&(u, v, x)| ((u, v), x))),
            degree: self.degree,
        })
    }
}

/// A finite cyclic cover and its simplicial projection.
#[derive(Clone, Debug)]
pub struct Cover {
    pub manifold: ManifoldComplex,
    /// Cover vertex → base vertex.
    pub projection: Vec<usize>,
    pub degree: usize,
}

/// Lifts every facet `(v0, …, vn)` to the sheets `s ∈ Z/d` as
/// `((v0, s), (v1, s + c(v0,v1)), …)`; vertex `(v, s)` gets index `v·d + s`.
pub fn cyclic_cover(spec: &CoverSpec, name: &str) -> Result<Cover, ConstructionError> {
    let d = spec.degree;
    if d == 0 {
        return Err(ConstructionError::ZeroDegree);
    }
    let base = spec.base.complex();
    if !spec.base.is_connected() {
        return Err(ConstructionError::Disconnected(base.name().to_string()));
    }
    spec.cocycle.check(base, d)?;
    let sheet = |s: usize, x: i64| (s as i64 + x).rem_euclid(d as i64) as usize;
    let mut facets = Vec::with_capacity(base.facet_count() * d);
    for s in 0..d {
        for f in spec.base.oriented_facets() {
            let v0 = f[0];
            facets.push(f.iter().map(|&v| v * d + sheet(s, spec.cocycle.value(v0, v))).collect());
        }
    }
    let complex = Complex::new(name, base.dim(), base.vertex_count() * d, facets)?;
    let manifold = manifold_check(&complex)?;
    let expected = d as i64 * spec.base.euler_characteristic();
    if manifold.euler_characteristic() != expected {
        return Err(ConstructionError::Identity(format!(
            "χ(cover) = {} but d·χ(base) = {expected}",
            manifold.euler_characteristic()
        )));
    }
    Ok(Cover {
        manifold,
        projection: (0..base.vertex_count() * d).map(|v| v / d).collect(),
        degree: d,
    })
}
