//! Triangulated manifolds: the ridge condition, boundary extraction and
//! coherent orientation.
//!
//! The orientation of each facet-graph component is the orientation of its
//! first facet tuple; all other facets receive the sign forced by
//! cancellation across interior ridges.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::chain::Chain;
use crate::complex::{oriented_tuple, Complex, Simplex};
use crate::rational::q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("ridge {0:?} lies in {1} facets")]
    BranchingRidge(Vec<usize>, usize),
    #[error("orientation propagation found a contradiction at ridge {0:?}; the complex is non-orientable")]
    NonOrientable(Vec<usize>),
    #[error("boundary around face {0:?} is not a closed manifold")]
    BadBoundary(Vec<usize>),
    #[error("complex has {0} components; a connected manifold is required")]
    Disconnected(usize),
    #[error("expected a closed manifold")]
    NotClosed,
    #[error("expected a manifold with non-empty boundary")]
    Closed,
}

/// An oriented pseudomanifold whose boundary components are closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldComplex {
    complex: Complex,
    orientation: Vec<i32>,
    boundary_components: Vec<ManifoldComplex>,
    components: usize,
    component_of: Vec<usize>,
}

impl ManifoldComplex {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn name(&self) -> &str {
        self.complex.name()
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    /// Sign of each facet relative to its tuple.
    pub fn orientation(&self) -> &[i32] {
        &self.orientation
    }

    pub fn boundary_components(&self) -> &[ManifoldComplex] {
        &self.boundary_components
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_components.is_empty()
    }

    /// Number of facet-graph components.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Facet-graph component of each facet.
    pub fn component_of(&self) -> &[usize] {
        &self.component_of
    }

    /// Fundamental cycle of each facet-graph component.
    pub fn component_cycles(&self) -> Vec<Chain> {
        let mut out = vec![Chain::zero(self.dim()); self.components];
        for ((f, &s), &c) in self
            .complex
            .facets()
            .iter()
            .zip(&self.orientation)
            .zip(&self.component_of)
        {
            out[c].add_oriented(f, q(s as i64));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    pub fn require_connected(&self) -> Result<&Self, ManifoldError> {
        if self.is_connected() {
            Ok(self)
        } else {
            Err(ManifoldError::Disconnected(self.components))
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    /// χ(M) − χ(∂M).
    pub fn relative_euler_characteristic(&self) -> i64 {
        self.euler_characteristic()
            - self
                .boundary_components
                .iter()
                .map(|b| b.euler_characteristic())
                .sum::<i64>()
    }

    /// The whole boundary as one complex with the induced orientation
    /// (`None` for closed manifolds and for 1-manifolds, whose boundary
    /// points carry signs a complex cannot record).
    pub fn boundary_complex(&self) -> Option<Complex> {
        if self.is_closed() || self.dim() == 0 {
            return None;
        }
        let facets: Vec<Vec<usize>> = self
            .boundary_components
            .iter()
            .flat_map(|b| b.oriented_facets())
            .collect();
        Some(
            Complex::new(
                format!("∂{}", self.name()),
                self.dim() - 1,
                self.complex.vertex_count(),
                facets,
            )
            .expect("boundary faces are distinct"),
        )
    }

    /// Facet tuples with the orientation sign absorbed.
    pub fn oriented_facets(&self) -> Vec<Vec<usize>> {
        self.complex
            .facets()
            .iter()
            .zip(&self.orientation)
            .map(|(f, &s)| {
                let (simplex, parity) = Simplex::from_ordered(f).expect("valid facet");
                oriented_tuple(&simplex, parity * s)
            })
            .collect()
    }

    /// Coherently oriented sum of all facets: a fundamental cycle, or a
    /// relative fundamental cycle when the boundary is non-empty.
    pub fn fundamental_cycle(&self) -> Chain {
        let mut c = Chain::zero(self.dim());
        for (f, &s) in self.complex.facets().iter().zip(&self.orientation) {
            c.add_oriented(f, q(s as i64));
        }
        c
    }

    /// Sum of the boundary components' fundamental cycles.
    pub fn boundary_cycle(&self) -> Chain {
        let mut c = Chain::zero(self.dim().saturating_sub(1));
        for b in &self.boundary_components {
            c = &c + &b.fundamental_cycle();
        }
        c
    }

    /// The same manifold with every facet's orientation reversed.
    pub fn reversed(&self) -> ManifoldComplex {
        manifold_check(&self.complex.reversed()).expect("reversal of a manifold is a manifold")
    }

    /// Relabels vertices by `v + offset` inside a vertex range of `vertex_count`.
    pub fn shifted(&self, offset: usize, vertex_count: usize) -> ManifoldComplex {
        let facets = self
            .complex
            .facets()
            .iter()
            .map(|f| f.iter().map(|v| v + offset).collect())
            .collect();
        ManifoldComplex {
            complex: Complex::new(self.name(), self.dim(), vertex_count, facets).expect("relabelling keeps validity"),
            orientation: self.orientation.clone(),
            boundary_components: self
                .boundary_components
                .iter()
                .map(|b| b.shifted(offset, vertex_count))
                .collect(),
            components: self.components,
            component_of: self.component_of.clone(),
        }
    }

    /// The same complex with orientation absorbed into the facet tuples, so
    /// every sign is +1.
    pub fn normalized(&self) -> ManifoldComplex {
        if self.dim() == 0 {
            return self.clone();
        }
        let c = Complex::new(
            self.name(),
            self.dim(),
            self.complex.vertex_count(),
            self.oriented_facets(),
        )
        .expect("same facets");
        manifold_check(&c).expect("same manifold")
    }

    pub fn renamed(mut self, name: impl Into<String>) -> ManifoldComplex {
        self.complex = self.complex.with_name(name);
        self
    }

    /// Closed 0-manifold with explicit point signs.
    fn points(name: String, vertex_count: usize, points: Vec<(usize, i32)>) -> ManifoldComplex {
        let complex = Complex::new(name, 0, vertex_count, points.iter().map(|&(v, _)| vec![v]).collect())
            .expect("distinct points");
        let n = points.len();
        ManifoldComplex {
            complex,
            orientation: points.into_iter().map(|(_, s)| s).collect(),
            boundary_components: Vec::new(),
            components: n,
            component_of: (0..n).collect(),
        }
    }
}

/// Checks the ridge condition, extracts boundary components and orients
/// every facet-graph component by sign propagation.
pub fn manifold_check(k: &Complex) -> Result<ManifoldComplex, ManifoldError> {
    let n = k.dim();
    let facets = k.facets();
    if n == 0 {
        return Ok(ManifoldComplex::points(
            k.name().to_string(),
            k.vertex_count(),
            facets.iter().map(|f| (f[0], 1)).collect(),
        ));
    }
    // ridge -> [(facet, coefficient of ridge in the boundary of the facet tuple)]
    let mut ridges: BTreeMap<Simplex, Vec<(usize, i32)>> = BTreeMap::new();
    for (fi, f) in facets.iter().enumerate() {
        let (s, parity) = Simplex::from_ordered(f).expect("valid facet");
        for i in 0..s.len() {
            let sign = if i % 2 == 0 { parity } else { -parity };
            ridges.entry(s.face(i)).or_default().push((fi, sign));
        }
    }
    let mut adjacency: Vec<Vec<(usize, i32, i32, &Simplex)>> = vec![Vec::new(); facets.len()];
    for (r, inc) in &ridges {
        match inc.as_slice() {
            [_] => {}
            [(f, a), (g, b)] => {
                adjacency[*f].push((*g, *a, *b, r));
                adjacency[*g].push((*f, *b, *a, r));
            }
            _ => return Err(ManifoldError::BranchingRidge(r.vertices().to_vec(), inc.len())),
        }
    }
    let mut sign = vec![0i32; facets.len()];
    let mut component_of = vec![0; facets.len()];
    let mut components = 0;
    for root in 0..facets.len() {
        if sign[root] != 0 {
            continue;
        }
        components += 1;
        sign[root] = 1;
        component_of[root] = components - 1;
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            for &(g, a, b, r) in &adjacency[f] {
                // sign_f * a + sign_g * b = 0
                let want = -sign[f] * a * b;
                if sign[g] == 0 {
                    sign[g] = want;
                    component_of[g] = components - 1;
                    queue.push_back(g);
                } else if sign[g] != want {
                    return Err(ManifoldError::NonOrientable(r.vertices().to_vec()));
                }
            }
        }
    }
    let boundary: Vec<(Simplex, i32)> = ridges
        .iter()
        .filter(|(_, inc)| inc.len() == 1)
        .map(|(r, inc)| (r.clone(), sign[inc[0].0] * inc[0].1))
        .collect();
    let boundary_components = split_boundary(k, n, boundary)?;
    Ok(ManifoldComplex {
        complex: k.clone(),
        orientation: sign,
        boundary_components,
        components,
        component_of,
    })
}

fn split_boundary(k: &Complex, n: usize, boundary: Vec<(Simplex, i32)>) -> Result<Vec<ManifoldComplex>, ManifoldError> {
    if boundary.is_empty() {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(boundary
            .into_iter()
            .enumerate()
            .map(|(i, (p, s))| {
                ManifoldComplex::points(
                    format!("∂{}.b{i}", k.name()),
                    k.vertex_count(),
                    vec![(p.vertices()[0], s)],
                )
            })
            .collect());
    }
    // group boundary ridges through shared (n-2)-faces
    let mut by_face: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (i, (r, _)) in boundary.iter().enumerate() {
        for j in 0..r.len() {
            by_face.entry(r.face(j)).or_default().push(i);
        }
    }
    if let Some((face, _)) = by_face.iter().find(|(_, v)| v.len() != 2) {
        return Err(ManifoldError::BadBoundary(face.vertices().to_vec()));
    }
    let mut label = vec![usize::MAX; boundary.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..boundary.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        label[start] = id;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let r = &boundary[i].0;
            for j in 0..r.len() {
                for &other in &by_face[&r.face(j)] {
                    if label[other] == usize::MAX {
                        label[other] = id;
                        members.push(other);
                        stack.push(other);
                    }
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(ci, members)| {
            let facets = members
                .iter()
                .map(|&i| oriented_tuple(&boundary[i].0, boundary[i].1))
                .collect();
            let c = Complex::new(format!("∂{}.b{ci}", k.name()), n - 1, k.vertex_count(), facets)
                .expect("boundary ridges are distinct");
            let m = manifold_check(&c)?;
            debug_assert!(m.orientation.iter().all(|&s| s == 1));
            Ok(m)
        })
        .collect()
}
