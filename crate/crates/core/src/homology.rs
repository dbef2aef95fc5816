//! Integral (relative) simplicial homology via Smith normal form.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex, ComplexError, Simplex};
use crate::snf::{self, Overflow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// Betti numbers and torsion coefficients in every degree `0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub betti: Vec<u64>,
    /// Torsion coefficients (> 1) per degree, in divisibility order.
    pub torsion: Vec<Vec<u64>>,
}

impl HomologyProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    /// Whether H_k is infinite cyclic.
    pub fn is_z(&self, k: usize) -> bool {
        self.betti.get(k) == Some(&1) && self.torsion.get(k).is_some_and(Vec::is_empty)
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.betti.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "H{k} = Z^{b}")?;
            for t in &self.torsion[k] {
                write!(f, " + Z/{t}")?;
            }
        }
        Ok(())
    }
}

/// Integral homology of `k`, or of the pair `(k, relative_to)`.
pub fn homology(k: &Complex, relative_to: Option<&Complex>) -> Result<HomologyProfile, HomologyError> {
    let excluded: BTreeSet<Simplex> = match relative_to {
        Some(l) => {
            if !l.is_subcomplex_of(k) {
                return Err(ComplexError::NotSubcomplex(l.name().into(), k.name().into()).into());
            }
            (0..=l.dim()).flat_map(|j| l.simplices(j).iter().cloned()).collect()
        }
        None => BTreeSet::new(),
    };
    let cells: Vec<Vec<&Simplex>> = (0..=k.dim())
        .map(|j| k.simplices(j).iter().filter(|s| !excluded.contains(*s)).collect())
        .collect();
    // invariant factors of the boundary map out of degree j, j = 1..=dim
    let mut factors: Vec<Vec<i128>> = vec![Vec::new(); k.dim() + 2];
    for j in 1..=k.dim() {
        factors[j] = snf::invariant_factors(boundary_matrix(&cells[j - 1], &cells[j]))?;
    }
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for j in 0..=k.dim() {
        let rank_out = factors[j].len() as u64;
        let rank_in = factors[j + 1].len() as u64;
        betti.push(cells[j].len() as u64 - rank_out - rank_in);
        torsion.push(factors[j + 1].iter().filter(|&&d| d > 1).map(|&d| d as u64).collect());
    }
    Ok(HomologyProfile { betti, torsion })
}

/// Dense matrix of the boundary from `upper` (columns) to `lower` (rows).
pub(crate) fn boundary_matrix(lower: &[&Simplex], upper: &[&Simplex]) -> Vec<Vec<i128>> {
    let mut m = vec![vec![0i128; upper.len()]; lower.len()];
    for (c, s) in upper.iter().enumerate() {
        for i in 0..s.len() {
            let face = s.face(i);
            if let Ok(r) = lower.binary_search(&&face) {
                m[r][c] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    m
}
