//! The shipped triangulation library and its named edge cocycles.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::complex::{oriented_tuple, Complex, ComplexError, Simplex};
use crate::constructions::Cocycle;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("unknown dataset `{0}`")]
    Unknown(String),
    #[error("unknown cocycle `{1}` on `{0}`")]
    UnknownCocycle(String, String),
    #[error("dataset `{0}`: {1}")]
    Invalid(String, ComplexError),
    #[error("reading {0}: {1}")]
    Io(String, std::io::Error),
}

/// Names accepted by [`builtin`] (parametrised families shown with `n`).
pub const NAMES: &[&str] = &[
    "Delta[n]",
    "Sphere[n]",
    "Interval",
    "Circle3",
    "Torus7",
    "PuncturedTorus",
    "Annulus",
    "Mobius",
    "RP2-6",
];

/// Concrete names used by tests and the dataset export.
pub const SHIPPED: &[&str] = &[
    "Delta[2]",
    "Delta[3]",
    "Sphere[1]",
    "Sphere[2]",
    "Sphere[3]",
    "Interval",
    "Circle3",
    "Torus7",
    "PuncturedTorus",
    "Annulus",
    "Mobius",
    "RP2-6",
];

fn build(name: &str, dim: usize, vertices: usize, facets: Vec<Vec<usize>>) -> Complex {
    Complex::new(name, dim, vertices, facets).expect("builtin dataset is valid")
}

pub fn delta(n: usize) -> Complex {
    build(&format!("Delta[{n}]"), n, n + 1, vec![(0..=n).collect()])
}

/// ∂Δ^{n+1}, coherently oriented as the boundary of the ascending simplex.
pub fn sphere(n: usize) -> Complex {
    let top = Simplex::from_sorted((0..n + 2).collect());
    let facets = (0..n + 2)
        .map(|i| oriented_tuple(&top.face(i), if i % 2 == 0 { 1 } else { -1 }))
        .collect();
    build(&format!("Sphere[{n}]"), n, n + 2, facets)
}

pub fn torus7() -> Complex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 3) % 7, (i + 2) % 7]);
    }
    build("Torus7", 2, 7, facets)
}

/// Torus7 with its last facet removed.
pub fn punctured_torus() -> Complex {
    let t = torus7();
    let idx: Vec<usize> = (0..t.facet_count() - 1).collect();
    t.sub_by_facets("PuncturedTorus", &idx)
}

/// Outer circle 0,1,2 and inner circle 3,4,5.
pub fn annulus() -> Complex {
    build(
        "Annulus",
        2,
        6,
        vec![
            vec![0, 1, 3],
            vec![1, 4, 3],
            vec![1, 2, 4],
            vec![2, 5, 4],
            vec![2, 0, 5],
            vec![0, 3, 5],
        ],
    )
}

pub fn mobius() -> Complex {
    let facets = (0..5).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).collect();
    build("Mobius", 2, 5, facets)
}

/// The 6-vertex projective plane.
pub fn rp2_6() -> Complex {
    build(
        "RP2-6",
        2,
        6,
        vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 5, 1],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 1],
            vec![4, 5, 2],
            vec![5, 1, 3],
        ],
    )
}

fn bracket(name: &str, family: &str) -> Option<usize> {
    name.strip_prefix(family)?
        .strip_prefix('[')?
        .strip_suffix(']')?
        .trim()
        .parse()
        .ok()
}

/// Looks up a builtin dataset by name.
pub fn builtin(name: &str) -> Result<Complex, DatasetError> {
    if let Some(n) = bracket(name, "Delta") {
        return Ok(delta(n));
    }
    if let Some(n) = bracket(name, "Sphere") {
        return Ok(sphere(n));
    }
    Ok(match name {
        "Interval" => delta(1).with_name("Interval"),
        "Circle3" => sphere(1).with_name("Circle3"),
        "Torus7" => torus7(),
        "PuncturedTorus" => punctured_torus(),
        "Annulus" => annulus(),
        "Mobius" => mobius(),
        "RP2-6" => rp2_6(),
        _ => return Err(DatasetError::Unknown(name.to_string())),
    })
}

/// Named cocycles: `zero` on anything, `meridian` on Torus7 and its
/// relatives, `winding` on Annulus.
pub fn cocycle(complex: &Complex, name: &str) -> Result<Cocycle, DatasetError> {
    let unknown = || DatasetError::UnknownCocycle(complex.name().to_string(), name.to_string());
    let edges = complex.simplices(1);
    let values: BTreeMap<(usize, usize), i64> = match name {
        "zero" => BTreeMap::new(),
        "meridian" if complex.vertex_count() == 7 => edges
            .iter()
            .map(|e| {
                let (u, v) = (e.vertices()[0], e.vertices()[1]);
                let step = (v + 7 - u) % 7;
                let val = match step {
                    1 | 3 => 1,
                    6 | 4 => -1,
                    _ => 0,
                };
                ((u, v), val)
            })
            .collect(),
        "winding" if complex.name() == "Annulus" => edges
            .iter()
            .map(|e| {
                let (u, v) = (e.vertices()[0], e.vertices()[1]);
                let val = match (u % 3, v % 3) {
                    (2, 0) => 1,
                    (0, 2) => -1,
                    _ => 0,
                };
                ((u, v), val)
            })
            .collect(),
        _ => return Err(unknown()),
    };
    Ok(Cocycle::new(values))
}

/// A small closed orientable surface model with the given Euler
/// characteristic, when one ships.
pub fn closed_surface_model(chi: i64) -> Option<Complex> {
    match chi {
        2 => Some(sphere(2)),
        0 => Some(torus7()),
        _ => None,
    }
}

/// Builtins plus triangulation files loaded from a directory (by the
/// `name` field of each document; files shadow builtins).
#[derive(Clone, Debug, Default)]
pub struct Library {
    files: BTreeMap<String, Complex>,
}

impl Library {
    pub fn builtin() -> Library {
        Library::default()
    }

    pub fn load_dir(dir: &Path) -> Result<Library, DatasetError> {
        let mut files = BTreeMap::new();
        let io = |e| DatasetError::Io(dir.display().to_string(), e);
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p).map_err(|e| DatasetError::Io(p.display().to_string(), e))?;
            let c = Complex::from_json(&text).map_err(|e| DatasetError::Invalid(p.display().to_string(), e))?;
            files.insert(c.name().to_string(), c);
        }
        Ok(Library { files })
    }

    pub fn get(&self, name: &str) -> Result<Complex, DatasetError> {
        match self.files.get(name) {
            Some(c) => Ok(c.clone()),
            None => builtin(name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;
    use crate::manifold::{manifold_check, ManifoldError};

    #[test]
    fn counts_and_homology() {
        let t = torus7();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (7, 21, 14));
        assert_eq!(homology(&t, None).unwrap().betti, vec![1, 2, 1]);
        assert_eq!(punctured_torus().euler_characteristic(), -1);
        assert_eq!(sphere(2).euler_characteristic(), 2);
        assert_eq!(sphere(2).facet_count(), 4);
    }

    #[test]
    fn orientations_are_coherent_as_written() {
        for c in [sphere(1), sphere(2), sphere(3), torus7(), annulus(), punctured_torus()] {
            let m = manifold_check(&c).unwrap();
            assert!(m.orientation().iter().all(|&s| s == 1), "{}", c.name());
        }
    }

    #[test]
    fn annulus_has_two_circles() {
        let m = manifold_check(&annulus()).unwrap();
        assert_eq!(m.boundary_components().len(), 2);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn non_orientable_samples() {
        assert!(matches!(manifold_check(&rp2_6()), Err(ManifoldError::NonOrientable(_))));
        assert!(matches!(
            manifold_check(&mobius()),
            Err(ManifoldError::NonOrientable(_))
        ));
    }

    #[test]
    fn lookup() {
        assert_eq!(builtin("Sphere[2]").unwrap().facet_count(), 4);
        assert_eq!(builtin("Delta[3]").unwrap().dim(), 3);
        assert!(matches!(builtin("NoSuchThing"), Err(DatasetError::Unknown(_))));
    }
}
