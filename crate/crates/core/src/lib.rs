//! Exact combinatorial toolkit for simplicial volume and Euler characteristic
//! bookkeeping on triangulated manifolds.

pub mod certificates;
pub mod chain;
pub mod cobordism;
pub mod complex;
pub mod constructions;
pub mod datasets;
pub mod homology;
pub mod inference;
pub mod manifold;
pub mod rational;
pub mod snf;
pub mod subdivision;

pub use chain::Chain;
pub use complex::{Complex, ComplexError, Simplex, TriangulationDoc};
pub use homology::{homology, HomologyError, HomologyProfile};
pub use manifold::{manifold_check, ManifoldComplex, ManifoldError};
pub use rational::Q;
