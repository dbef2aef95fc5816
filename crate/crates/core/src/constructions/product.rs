use crate::chain::Chain;
use crate::complex::{oriented_tuple, Complex, Simplex};
use crate::rational::binomial;

use super::ConstructionError;

/// Staircase triangulation of a product with its shuffle chain map.
#[derive(Clone, Debug)]
pub struct Product {
    pub complex: Complex,
    right_vertices: usize,
}

impl Product {
    /// Vertex of the product complex sitting over `(u, v)`.
    pub fn vertex(&self, u: usize, v: usize) -> usize {
        u * self.right_vertices + v
    }

    /// Eilenberg–Zilber shuffle product of chains on the two factors.
    pub fn shuffle(&self, a: &Chain, b: &Chain) -> Chain {
        cross(a, b, self.right_vertices)
    }
}

/// Lattice paths from (0,0) to (p,q): each path is the list of visited
/// points with the sign of the underlying (p,q)-shuffle.
fn staircases(p: usize, q: usize) -> Vec<(Vec<(usize, usize)>, i32)> {
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    walk(p, q, &mut path, 0, 0, &mut out);
    out
}

/// `inversions` counts pairs (vertical step, later horizontal step).
fn walk(
    p: usize,
    q: usize,
    path: &mut Vec<(usize, usize)>,
    ups: usize,
    inversions: usize,
    out: &mut Vec<(Vec<(usize, usize)>, i32)>,
) {
    let (i, j) = *path.last().expect("non-empty");
    if i == p && j == q {
        out.push((path.clone(), if inversions.is_multiple_of(2) { 1 } else { -1 }));
        return;
    }
    if i < p {
        path.push((i + 1, j));
        walk(p, q, path, ups, inversions + ups, out);
        path.pop();
    }
    if j < q {
        path.push((i, j + 1));
        walk(p, q, path, ups + 1, inversions, out);
        path.pop();
    }
}

/// Shuffle product of two chains; `right_vertices` fixes the vertex
/// encoding `(u, v) ↦ u·right_vertices + v`.
pub fn cross(a: &Chain, b: &Chain, right_vertices: usize) -> Chain {
    let (p, q) = (a.degree(), b.degree());
    let paths = staircases(p, q);
    let mut out = Chain::zero(p + q);
    for (s, x) in a.terms() {
        for (t, y) in b.terms() {
            let coeff = x * y;
            for (path, sign) in &paths {
                let tuple: Vec<usize> = path
                    .iter()
                    .map(|&(i, j)| s.vertices()[i] * right_vertices + t.vertices()[j])
                    .collect();
                out.add_oriented(&tuple, if *sign > 0 { coeff.clone() } else { -coeff.clone() });
            }
        }
    }
    out
}

/// Product triangulation: each facet pair contributes C(p+q, p) staircase
/// simplices, oriented by the factor orientations and the shuffle sign.
pub fn product(m: &Complex, n: &Complex, name: &str) -> Result<Product, ConstructionError> {
    let (p, q) = (m.dim(), n.dim());
    let right_vertices = n.vertex_count();
    let paths = staircases(p, q);
    let mut facets = Vec::with_capacity(m.facet_count() * n.facet_count() * paths.len());
    for f in m.facets() {
        let (s, sf) = Simplex::from_ordered(f).expect("valid facet");
        for g in n.facets() {
            let (t, sg) = Simplex::from_ordered(g).expect("valid facet");
            for (path, sign) in &paths {
                let tuple: Vec<usize> = path
                    .iter()
                    .map(|&(i, j)| s.vertices()[i] * right_vertices + t.vertices()[j])
                    .collect();
                facets.push(oriented_tuple(&Simplex::from_sorted(tuple), sf * sg * sign));
            }
        }
    }
    let complex = Complex::new(name, p + q, m.vertex_count() * right_vertices, facets)?;
    let expected = m.euler_characteristic() * n.euler_characteristic();
    if complex.euler_characteristic() != expected {
        return Err(ConstructionError::Identity(format!(
            "χ(M×N) = {} but χ(M)·χ(N) = {expected}",
            complex.euler_characteristic()
        )));
    }
    let shuffles = binomial((p + q) as u64, p as u64);
    debug_assert_eq!(
        crate::rational::q((m.facet_count() * n.facet_count()) as i64) * shuffles,
        crate::rational::q(complex.facet_count() as i64)
    );
    Ok(Product {
        complex,
        right_vertices,
    })
}
