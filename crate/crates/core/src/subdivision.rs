//! Barycentric and stellar subdivision with chain-level subdivision maps.

use std::collections::BTreeMap;

use crate::chain::Chain;
use crate::complex::{oriented_tuple, Complex, ComplexError, Simplex};

/// A barycentric subdivision together with the barycenter of every
/// simplex of the original complex.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: Complex,
    barycenter: BTreeMap<Simplex, usize>,
}

impl Subdivision {
    /// Vertex of the subdivision sitting at the barycenter of `s`.
    pub fn barycenter(&self, s: &Simplex) -> Option<usize> {
        self.barycenter.get(s).copied()
    }

    /// The subdivision chain map: each oriented simplex goes to the signed
    /// sum of its flag simplices.
    pub fn map_chain(&self, c: &Chain) -> Result<Chain, ComplexError> {
        let mut out = Chain::zero(c.degree());
        for (s, coeff) in c.terms() {
            if !self.barycenter.contains_key(s) {
                return Err(ComplexError::MissingSimplex(s.vertices().to_vec()));
            }
            for (tuple, sign) in flags(s, &self.barycenter) {
                out.add_oriented(&tuple, if sign > 0 { coeff.clone() } else { -coeff.clone() });
            }
        }
        Ok(out)
    }

    /// The subdivision of a subcomplex, in this subdivision's vertex labels.
    pub fn subcomplex(&self, l: &Complex) -> Result<Complex, ComplexError> {
        let mut facets = Vec::new();
        for f in l.facets() {
            let (s, parity) = Simplex::from_ordered(f).ok_or(ComplexError::Malformed(format!("{f:?}")))?;
            if !self.barycenter.contains_key(&s) {
                return Err(ComplexError::MissingSimplex(s.vertices().to_vec()));
            }
            for (tuple, sign) in flags(&s, &self.barycenter) {
                let (t, p) = Simplex::from_ordered(&tuple).expect("flag simplex");
                facets.push(oriented_tuple(&t, p * sign * parity));
            }
        }
        Complex::new(
            format!("Sd({})", l.name()),
            l.dim(),
            self.complex.vertex_count(),
            facets,
        )
    }
}

/// Heap's algorithm; returns every permutation of `0..n` with its sign.
fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![(a.clone(), 1)];
    let mut c = vec![0usize; n];
    let mut sign = 1;
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Flag simplices (b(τ_0), …, b(τ_k)) of an ascending simplex, where
/// τ_j holds the first j+1 entries of a permutation, signed by it.
fn flags(s: &Simplex, bary: &BTreeMap<Simplex, usize>) -> Vec<(Vec<usize>, i32)> {
    let v = s.vertices();
    permutations(v.len())
        .into_iter()
        .map(|(perm, sign)| {
            let tuple = (1..=v.len())
                .map(|j| {
                    let mut tau: Vec<usize> = perm[..j].iter().map(|&p| v[p]).collect();
                    tau.sort_unstable();
                    bary[&Simplex::from_sorted(tau)]
                })
                .collect();
            (tuple, sign)
        })
        .collect()
}

/// First barycentric subdivision. Original vertices keep their indices;
/// barycenters of higher simplices follow in (dimension, vertex tuple)
/// order. Facets inherit the orientation of the facet they subdivide.
pub fn barycentric_subdivide(k: &Complex) -> Subdivision {
    let mut barycenter = BTreeMap::new();
    for s in k.simplices(0) {
        barycenter.insert(s.clone(), s.vertices()[0]);
    }
    let mut next = k.vertex_count();
    for d in 1..=k.dim() {
        for s in k.simplices(d) {
            barycenter.insert(s.clone(), next);
            next += 1;
        }
    }
    let mut facets = Vec::new();
    for f in k.facets() {
        let (s, parity) = Simplex::from_ordered(f).expect("valid facet");
        for (tuple, sign) in flags(&s, &barycenter) {
            let (t, p) = Simplex::from_ordered(&tuple).expect("flag simplex");
            facets.push(oriented_tuple(&t, p * sign * parity));
        }
    }
    let complex =
        Complex::new(format!("Sd({})", k.name()), k.dim(), next, facets).expect("subdivision is a valid complex");
    Subdivision { complex, barycenter }
}

/// Starring of a simplex `s` (dimension ≥ 1) at a new vertex: every facet
/// containing `s` is replaced by the facets obtained by substituting the new
/// vertex for one vertex of `s`, in place, which keeps orientations.
pub fn stellar_subdivide(k: &Complex, s: &Simplex) -> Result<Complex, ComplexError> {
    if !k.contains(s) {
        return Err(ComplexError::MissingSimplex(s.vertices().to_vec()));
    }
    if s.len() < 2 {
        return Err(ComplexError::Malformed(
            "stellar subdivision needs an edge or larger".into(),
        ));
    }
    let w = k.vertex_count();
    let mut facets = Vec::new();
    for f in k.facets() {
        if s.vertices().iter().all(|v| f.contains(v)) {
            for &v in s.vertices() {
                facets.push(f.iter().map(|&x| if x == v { w } else { x }).collect());
            }
        } else {
            facets.push(f.clone());
        }
    }
    Complex::new(k.name(), k.dim(), w + 1, facets)
}
