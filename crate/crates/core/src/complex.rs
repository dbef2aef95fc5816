//! Finite oriented simplicial complexes given by ordered facet tuples.
//!
//! A facet tuple carries an orientation: two tuples with the same vertex set
//! describe the same oriented simplex iff they differ by an even permutation.
//! Every simplex of a [`Complex`] is a face of some facet, so the complex is
//! pure by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::Chain;

/// Errors raised while building or querying a complex.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("malformed triangulation document: {0}")]
    Malformed(String),
    #[error("facet {facet} has vertex index {index} outside [0, {vertex_count})")]
    VertexOutOfRange {
        facet: usize,
        index: usize,
        vertex_count: usize,
    },
    #[error("facet {0} repeats a vertex")]
    DuplicateVertex(usize),
    #[error("facet {0} has the wrong length for a pure complex of dimension {1}")]
    NonPure(usize, usize),
    #[error("facets {0} and {1} span the same vertex set")]
    DuplicateFacet(usize, usize),
    #[error("simplex {0:?} is not in the complex")]
    MissingSimplex(Vec<usize>),
    #[error("{0} is not a subcomplex of {1}")]
    NotSubcomplex(String, String),
    #[error("chain of degree {0} has no boundary")]
    DegreeZero(usize),
}

/// A simplex in canonical form: strictly ascending vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Canonicalizes an ordered tuple. Returns the ascending simplex and the
    /// parity of the sorting permutation (+1 or -1), or `None` on a repeated
    /// vertex.
    pub fn from_ordered(tuple: &[usize]) -> Option<(Simplex, i32)> {
        let mut v = tuple.to_vec();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Simplex(v), sign))
    }

    /// Builds a simplex from vertices already known to be strictly ascending.
    pub fn from_sorted(v: Vec<usize>) -> Simplex {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The face opposite to the vertex at position `i`.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// All faces of every dimension, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The on-disk triangulation document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub name: String,
    pub dim: usize,
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

/// A validated finite oriented simplicial complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "TriangulationDoc", into = "TriangulationDoc")]
pub struct Complex {
    name: String,
    dim: usize,
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
    skeleton: Vec<Vec<Simplex>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertex_count == other.vertex_count && self.facets == other.facets
    }
}

impl Eq for Complex {}

impl TryFrom<TriangulationDoc> for Complex {
    type Error = ComplexError;
    fn try_from(doc: TriangulationDoc) -> Result<Self, Self::Error> {
        Complex::new(doc.name, doc.dim, doc.vertices, doc.facets)
    }
}

impl From<Complex> for TriangulationDoc {
    fn from(k: Complex) -> Self {
        TriangulationDoc {
            name: k.name,
            dim: k.dim,
            vertices: k.vertex_count,
            facets: k.facets,
        }
    }
}

impl Complex {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        vertex_count: usize,
        facets: Vec<Vec<usize>>,
    ) -> Result<Complex, ComplexError> {
        let mut seen: BTreeMap<Simplex, usize> = BTreeMap::new();
        for (i, f) in facets.iter().enumerate() {
            if f.len() != dim + 1 {
                return Err(ComplexError::NonPure(i, dim));
            }
            if let Some(&index) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange {
                    facet: i,
                    index,
                    vertex_count,
                });
            }
            let (s, _) = Simplex::from_ordered(f).ok_or(ComplexError::DuplicateVertex(i))?;
            if let Some(&j) = seen.get(&s) {
                return Err(ComplexError::DuplicateFacet(j, i));
            }
            seen.insert(s, i);
        }
        let mut layers: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        for s in seen.keys() {
            for face in s.all_faces() {
                layers[face.dim()].insert(face);
            }
        }
        Ok(Complex {
            name: name.into(),
            dim,
            vertex_count,
            facets,
            skeleton: layers.into_iter().map(|l| l.into_iter().collect()).collect(),
        })
    }

    /// Parses and validates a triangulation document (JSON body).
    pub fn from_json(text: &str) -> Result<Complex, ComplexError> {
        let doc: TriangulationDoc = serde_json::from_str(text).map_err(|e| ComplexError::Malformed(e.to_string()))?;
        Complex::try_from(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TriangulationDoc::from(self.clone())).expect("complex serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Complex {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The ordered (orientation-bearing) facet tuples.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Simplices of dimension `k`, ascending.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.skeleton.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        if s.is_empty() {
            return false;
        }
        self.simplices(s.dim()).binary_search(s).is_ok()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.simplices(s.dim()).binary_search(s).ok()
    }

    /// Vertices that occur in some facet.
    pub fn used_vertices(&self) -> &[Simplex] {
        self.simplices(0)
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|k| {
                let c = self.count(k) as i64;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.skeleton.iter().flatten().all(|s| other.contains(s))
    }

    /// Simplicial boundary of a chain whose simplices must lie in this complex.
    pub fn boundary(&self, c: &Chain) -> Result<Chain, ComplexError> {
        if c.degree() == 0 {
            return Err(ComplexError::DegreeZero(0));
        }
        if let Some(s) = c.simplices().find(|s| !self.contains(s)) {
            return Err(ComplexError::MissingSimplex(s.vertices().to_vec()));
        }
        Ok(c.boundary())
    }

    /// Facet-adjacency connected components, as lists of facet indices.
    pub fn facet_components(&self) -> Vec<Vec<usize>> {
        let n = self.facets.len();
        let canon: Vec<Simplex> = self
            .facets
            .iter()
            .map(|f| Simplex::from_ordered(f).expect("validated").0)
            .collect();
        // union-find over shared vertices
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, s) in canon.iter().enumerate() {
            for &v in s.vertices() {
                match owner.get(&v) {
                    Some(&j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        owner.insert(v, i);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// The subcomplex spanned by the given facet indices (same vertex range).
    pub fn sub_by_facets(&self, name: impl Into<String>, idx: &[usize]) -> Complex {
        let facets = idx.iter().map(|&i| self.facets[i].clone()).collect();
        Complex::new(name, self.dim, self.vertex_count, facets).expect("subset of valid facets")
    }

    /// Reverses the orientation of every facet.
    pub fn reversed(&self) -> Complex {
        let facets = self.facets.iter().map(|f| reverse_tuple(f)).collect();
        Complex::new(self.name.clone(), self.dim, self.vertex_count, facets).expect("reversal keeps validity")
    }
}

/// Swaps two entries of a tuple (or does nothing on a 0-simplex, which has
/// no odd permutation).
pub(crate) fn reverse_tuple(f: &[usize]) -> Vec<usize> {
    let mut g = f.to_vec();
    if g.len() >= 2 {
        let n = g.len();
        g.swap(n - 2, n - 1);
    }
    g
}

/// Encodes an oriented simplex as an ordered tuple: ascending order when
/// `sign > 0`, otherwise ascending with the last two entries swapped.
pub(crate) fn oriented_tuple(s: &Simplex, sign: i32) -> Vec<usize> {
    if sign > 0 {
        s.vertices().to_vec()
    } else {
        reverse_tuple(s.vertices())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_sorting() {
        assert_eq!(Simplex::from_ordered(&[0, 1, 2]).unwrap().1, 1);
        assert_eq!(Simplex::from_ordered(&[1, 0, 2]).unwrap().1, -1);
        assert_eq!(Simplex::from_ordered(&[2, 0, 1]).unwrap().1, 1);
        assert!(Simplex::from_ordered(&[0, 0, 1]).is_none());
    }

    #[test]
    fn sphere_counts() {
        let k = Complex::new(
            "S2",
            2,
            4,
            vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
        )
        .unwrap();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (4, 6, 4));
        assert_eq!(k.euler_characteristic(), 2);
    }

    #[test]
    fn rejects_bad_documents() {
        assert_eq!(
            Complex::new("x", 2, 3, vec![vec![0, 0, 1]]),
            Err(ComplexError::DuplicateVertex(0))
        );
        assert!(matches!(
            Complex::new("x", 2, 3, vec![vec![0, 1, 3]]),
            Err(ComplexError::VertexOutOfRange { index: 3, .. })
        ));
        assert_eq!(
            Complex::new("x", 2, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]),
            Err(ComplexError::DuplicateFacet(0, 1))
        );
        assert_eq!(
            Complex::new("x", 2, 4, vec![vec![0, 1, 2], vec![2, 3]]),
            Err(ComplexError::NonPure(1, 2))
        );
        assert!(matches!(
            Complex::from_json("{\"name\": 1}"),
            Err(ComplexError::Malformed(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"name":"S2","dim":2,"vertices":4,"facets":[[1,2,3],[0,3,2],[0,1,3],[0,2,1]]}"#;
        let k = Complex::from_json(text).unwrap();
        assert_eq!(k.to_json(), text);
    }
}
