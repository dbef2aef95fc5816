use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{disjoint_union, identify, ConstructionError, Quotient};
use crate::chain::Chain;
use crate::complex::{reverse_tuple, Complex, ComplexError, Simplex};
use crate::manifold::{manifold_check, ManifoldComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Two boundary components to be identified by an orientation-reversing
/// simplicial isomorphism.
#[derive(Clone, Debug)]
pub struct GlueingSpec {
    pub left: ManifoldComplex,
    pub left_component: usize,
    /// `None` glues two boundary components of `left` to each other.
    pub right: Option<ManifoldComplex>,
    pub right_component: usize,
    /// Left boundary vertex to right boundary vertex, in each piece's own
    /// labels. Searched for when absent.
    pub vertex_bijection: Option<BTreeMap<usize, usize>>,
}

/// JSON sidecar form of a [`GlueingSpec`], referencing complexes by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueingDoc {
    pub left: String,
    pub left_component: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    pub right_component: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<[usize; 2]>>,
}

impl GlueingDoc {
    pub fn resolve(&self, lookup: impl Fn(&str) -> Option<ManifoldComplex>) -> Result<GlueingSpec, ConstructionError> {
        let get = |n: &str| lookup(n).ok_or_else(|| ConstructionError::UnknownInput(n.to_string()));
        Ok(GlueingSpec {
            left: get(&self.left)?,
            left_component: self.left_component,
            right: self.right.as_deref().map(get).transpose()?,
            right_component: self.right_component,
            vertex_bijection: self.map.as_ref().map(|m| m.iter().map(|p| (p[0], p[1])).collect()),
        })
    }
}

/// A glued manifold with the map carrying chains of the pieces into it.
#[derive(Clone, Debug)]
pub struct Glued {
    pub manifold: ManifoldComplex,
    quotient: Quotient,
    offset: usize,
}

impl Glued {
    pub fn push_forward(&self, c: &Chain, side: Side) -> Result<Chain, ComplexError> {
        match side {
            Side::Left => self.quotient.push(c),
            Side::Right => self.quotient.push(&c.map_vertices(|v| v + self.offset)),
        }
    }

    /// Whether a barycentric subdivision was needed to keep the quotient
    /// simplicial.
    pub fn subdivided(&self) -> bool {
        self.quotient.subdivided()
    }
}

fn component<'a>(
    m: &'a ManifoldComplex,
    index: usize,
    side: &'static str,
) -> Result<&'a ManifoldComplex, ConstructionError> {
    m.boundary_components()
        .get(index)
        .ok_or(ConstructionError::ComponentOutOfRange {
            side,
            index,
            count: m.boundary_components().len(),
        })
}

fn oriented_complex(m: &ManifoldComplex) -> Complex {
    Complex::new(m.name(), m.dim(), m.complex().vertex_count(), m.oriented_facets()).expect("same facets")
}

/// Checks that `phi` is a simplicial isomorphism `a → b` reversing the
/// fundamental cycles.
fn check_bijection(
    a: &ManifoldComplex,
    b: &ManifoldComplex,
    phi: &BTreeMap<usize, usize>,
) -> Result<(), ConstructionError> {
    let verts =
        |m: &ManifoldComplex| -> BTreeSet<usize> { m.complex().simplices(0).iter().map(|s| s.vertices()[0]).collect() };
    let (va, vb) = (verts(a), verts(b));
    let domain: BTreeSet<usize> = phi.keys().copied().collect();
    let image: BTreeSet<usize> = phi.values().copied().collect();
    if domain != va {
        return Err(ConstructionError::NotSimplicial("domain is not the vertex set".into()));
    }
    if image.len() != phi.len() || image != vb {
        return Err(ConstructionError::NotSimplicial(
            "not a bijection onto the vertex set".into(),
        ));
    }
    if a.complex().facet_count() != b.complex().facet_count() {
        return Err(ConstructionError::NotSimplicial("facet counts differ".into()));
    }
    for f in a.complex().facets() {
        let img: Vec<usize> = f.iter().map(|v| phi[v]).collect();
        let (s, _) = Simplex::from_ordered(&img).expect("bijection keeps vertices distinct");
        if !b.complex().contains(&s) || s.dim() != b.dim() {
            return Err(ConstructionError::NotSimplicial(format!("{s} is not a facet")));
        }
    }
    let pushed = a.fundamental_cycle().map_vertices(|v| phi[&v]);
    if pushed != -&b.fundamental_cycle() {
        return Err(ConstructionError::NotOrientationReversing);
    }
    Ok(())
}

/// Glues two boundary components along an orientation-reversing simplicial
/// isomorphism.
pub fn glue(spec: &GlueingSpec, name: &str) -> Result<Glued, ConstructionError> {
    let left = &spec.left;
    let n = left.dim();
    let a_local = component(left, spec.left_component, "left")?;
    let (union, offset, a, b, chi_pieces) = match &spec.right {
        Some(right) => {
            if right.dim() != n {
                return Err(ConstructionError::DimensionMismatch(n, right.dim()));
            }
            let b_local = component(right, spec.right_component, "right")?;
            let union = disjoint_union(name, &oriented_complex(left), &oriented_complex(right))?;
            let off = left.complex().vertex_count();
            let vc = union.vertex_count();
            (
                union,
                off,
                a_local.shifted(0, vc),
                b_local.shifted(off, vc),
                left.euler_characteristic() + right.euler_characteristic(),
            )
        }
        None => {
            if spec.left_component == spec.right_component {
                return Err(ConstructionError::SameComponent);
            }
            let b_local = component(left, spec.right_component, "right")?;
            (
                oriented_complex(left).with_name(name),
                0,
                a_local.clone(),
                b_local.clone(),
                left.euler_characteristic(),
            )
        }
    };
    let phi: BTreeMap<usize, usize> = match &spec.vertex_bijection {
        Some(map) => map.iter().map(|(&x, &y)| (x, y + offset)).collect(),
        None => find_reversing_iso(&a, &b).ok_or(ConstructionError::NoIsomorphism)?,
    };
    check_bijection(&a, &b, &phi)?;
    let quotient = identify(name, &union, &phi, &[a.complex().clone()])?;
    let manifold = manifold_check(&quotient.complex)?;
    let expected = chi_pieces - a.euler_characteristic();
    if manifold.euler_characteristic() != expected {
        return Err(ConstructionError::Identity(format!(
            "χ(glued) = {} but χ(left) + χ(right) − χ(piece) = {expected}",
            manifold.euler_characteristic()
        )));
    }
    Ok(Glued {
        manifold,
        quotient,
        offset,
    })
}

/// The double of a manifold with boundary, with its reflection chain map.
#[derive(Clone, Debug)]
pub struct Double {
    pub manifold: ManifoldComplex,
    quotient: Quotient,
    offset: usize,
}

impl Double {
    /// `c ↦ c + c̄`: the chain on the original plus its mirror image, carried
    /// into the double. When the quotient needed a subdivision, `c` is first
    /// subdivided, so norms double relative to [`Double::lift`].
    pub fn reflect(&self, c: &Chain) -> Result<Chain, ComplexError> {
        let here = self.quotient.push(c)?;
        let there = self.quotient.push(&c.map_vertices(|v| v + self.offset))?;
        Ok(&here - &there)
    }

    /// The image of `c` in the original half of the double.
    pub fn lift(&self, c: &Chain) -> Result<Chain, ComplexError> {
        self.quotient.push(c)
    }

    pub fn subdivided(&self) -> bool {
        self.quotient.subdivided()
    }
}

/// M ∪_∂ M̄ along the identity of the whole boundary.
pub fn double(m: &ManifoldComplex, name: &str) -> Result<Double, ConstructionError> {
    if m.is_closed() {
        return Err(ConstructionError::Closed(m.name().to_string()));
    }
    let own = oriented_complex(m);
    let union = disjoint_union(name, &own, &own.reversed())?;
    let offset = own.vertex_count();
    let vc = union.vertex_count();
    let mut pairs = BTreeMap::new();
    let mut glued = Vec::new();
    for b in m.boundary_components() {
        for s in b.complex().simplices(0) {
            let v = s.vertices()[0];
            pairs.insert(v + offset, v);
        }
        glued.push(b.shifted(offset, vc).complex().clone());
    }
    let quotient = identify(name, &union, &pairs, &glued)?;
    let manifold = manifold_check(&quotient.complex)?;
    let chi_boundary: i64 = m.boundary_components().iter().map(|b| b.euler_characteristic()).sum();
    let expected = 2 * m.euler_characteristic() - chi_boundary;
    if manifold.euler_characteristic() != expected || !manifold.is_closed() {
        return Err(ConstructionError::Identity(format!(
            "χ(D) = {} but 2χ(M) − χ(∂M) = {expected}",
            manifold.euler_characteristic()
        )));
    }
    Ok(Double {
        manifold,
        quotient,
        offset,
    })
}

/// Removes one facet from each summand and glues the two boundary spheres
/// by the positional map between the removed tuples, with the last two
/// images swapped so that it reverses orientation. Facets default to the
/// last one of each manifold.
pub fn connected_sum(
    m: &ManifoldComplex,
    n: &ManifoldComplex,
    facet_m: Option<usize>,
    facet_n: Option<usize>,
    name: &str,
) -> Result<Glued, ConstructionError> {
    if m.dim() != n.dim() {
        return Err(ConstructionError::DimensionMismatch(m.dim(), n.dim()));
    }
    if m.dim() < 2 {
        return Err(ConstructionError::DimensionTooSmall(m.dim(), 2));
    }
    for x in [m, n] {
        if !x.is_closed() {
            return Err(ConstructionError::NotClosed(x.name().to_string()));
        }
        if !x.is_connected() {
            return Err(ConstructionError::Disconnected(x.name().to_string()));
        }
    }
    let puncture =
        |x: &ManifoldComplex, f: Option<usize>| -> Result<(ManifoldComplex, Vec<usize>), ConstructionError> {
            let count = x.complex().facet_count();
            let f = f.unwrap_or(count - 1);
            if f >= count {
                return Err(ConstructionError::FacetOutOfRange(f, count));
            }
            let oriented = x.oriented_facets();
            let keep: Vec<usize> = (0..count).filter(|&i| i != f).collect();
            let c = oriented_complex(x).sub_by_facets(format!("{}°", x.name()), &keep);
            Ok((manifold_check(&c)?, oriented[f].clone()))
        };
    let (mo, fm) = puncture(m, facet_m)?;
    let (no, fno) = puncture(n, facet_n)?;
    let target = reverse_tuple(&fno);
    let map: BTreeMap<usize, usize> = fm.iter().copied().zip(target).collect();
    let spec = GlueingSpec {
        left: mo,
        left_component: 0,
        right: Some(no),
        right_component: 0,
        vertex_bijection: Some(map),
    };
    let glued = glue(&spec, name)?;
    let chi_sphere = if m.dim().is_multiple_of(2) { 2 } else { 0 };
    let expected = m.euler_characteristic() + n.euler_characteristic() - chi_sphere;
    if glued.manifold.euler_characteristic() != expected {
        return Err(ConstructionError::Identity(format!(
            "χ(M # N) = {} but χ(M) + χ(N) − χ(S^n) = {expected}",
            glued.manifold.euler_characteristic()
        )));
    }
    Ok(glued)
}

/// Ridge → [(facet index, opposite vertex)].
fn ridge_table(facets: &[Vec<usize>]) -> BTreeMap<Simplex, Vec<(usize, usize)>> {
    let mut t: BTreeMap<Simplex, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        for (j, &v) in f.iter().enumerate() {
            let mut r: Vec<usize> = f.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
            r.sort_unstable();
            t.entry(Simplex::from_sorted(r)).or_default().push((i, v));
        }
    }
    t
}

/// Searches for a simplicial isomorphism between two closed connected
/// manifolds of equal dimension that reverses their fundamental cycles.
/// The first facet of `a` is tried against every facet of `b` in every odd
/// vertex order; the rest of the map is forced by ridge adjacency.
pub fn find_reversing_iso(a: &ManifoldComplex, b: &ManifoldComplex) -> Option<BTreeMap<usize, usize>> {
    if a.dim() != b.dim() || (0..=a.dim()).any(|k| a.complex().count(k) != b.complex().count(k)) {
        return None;
    }
    let za = a.fundamental_cycle();
    let zb = b.fundamental_cycle();
    if a.dim() == 0 {
        let (pa, ca) = za.terms().next()?;
        let (pb, cb) = zb.terms().next()?;
        return (za.len() == 1 && zb.len() == 1 && *ca == -cb.clone())
            .then(|| BTreeMap::from([(pa.vertices()[0], pb.vertices()[0])]));
    }
    let fa = a.oriented_facets();
    let fb = b.oriented_facets();
    let ra = ridge_table(&fa);
    let rb = ridge_table(&fb);
    let b_index: BTreeMap<Simplex, usize> = fb
        .iter()
        .enumerate()
        .map(|(i, f)| (Simplex::from_ordered(f).expect("valid").0, i))
        .collect();
    let start = fa.first()?;
    for g in &fb {
        for perm in odd_orders(g) {
            let mut phi: BTreeMap<usize, usize> = start.iter().copied().zip(perm).collect();
            if extend(&fa, &ra, &rb, &b_index, &mut phi) {
                let pushed = za.map_vertices(|v| phi[&v]);
                if pushed == -&zb {
                    return Some(phi);
                }
            }
        }
    }
    None
}

/// Orders of `g` with the opposite orientation of `g`.
fn odd_orders(g: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = g.to_vec();
    permute(&mut cur, 0, &mut out);
    out.into_iter()
        .filter(|p| Simplex::from_ordered(p).expect("distinct").1 != Simplex::from_ordered(g).expect("distinct").1)
        .collect()
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

fn extend(
    fa: &[Vec<usize>],
    ra: &BTreeMap<Simplex, Vec<(usize, usize)>>,
    rb: &BTreeMap<Simplex, Vec<(usize, usize)>>,
    b_index: &BTreeMap<Simplex, usize>,
    phi: &mut BTreeMap<usize, usize>,
) -> bool {
    let mut used: BTreeSet<usize> = phi.values().copied().collect();
    let mut seen = vec![false; fa.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let img: Vec<usize> = fa[i].iter().map(|v| phi[v]).collect();
        let Some((img_s, _)) = Simplex::from_ordered(&img) else {
            return false;
        };
        let Some(&bi) = b_index.get(&img_s) else {
            return false;
        };
        for j in 0..fa[i].len() {
            let mut r: Vec<usize> = fa[i]
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &x)| x)
                .collect();
            r.sort_unstable();
            let Some(other) = ra[&Simplex::from_sorted(r.clone())].iter().find(|(f, _)| *f != i) else {
                continue;
            };
            let mut rimg: Vec<usize> = r.iter().map(|x| phi[x]).collect();
            rimg.sort_unstable();
            let Some(across) = rb.get(&Simplex::from_sorted(rimg)) else {
                return false;
            };
            let Some(&(_, w)) = across.iter().find(|(f, _)| *f != bi) else {
                return false;
            };
            let x = other.1;
            match phi.get(&x) {
                Some(&y) if y != w => return false,
                Some(_) => {}
                None => {
                    if !used.insert(w) {
                        return false;
                    }
                    phi.insert(x, w);
                }
            }
            if !seen[other.0] {
                seen[other.0] = true;
                queue.push_back(other.0);
            }
        }
    }
    seen.iter().all(|&s| s)
}
