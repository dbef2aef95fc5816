//! Smith normal form over the integers and exact rational span tests.
//!
//! Only the invariant factors are computed; homology never needs the
//! transforming matrices. Pivots are chosen as the smallest nonzero entry in
//! absolute value, which keeps entry growth small on boundary matrices.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::chain::Chain;
use crate::complex::Simplex;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("integer overflow during Smith normal form")]
pub struct Overflow;

/// Nonzero diagonal entries of the Smith normal form, positive and in
/// divisibility order.
pub fn invariant_factors(mut a: Vec<Vec<i128>>) -> Result<Vec<i128>, Overflow> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&a, t) else {
                return Ok(finish(diag));
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let x = a[i][t];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(p);
                axpy_row(&mut a, i, t, q)?;
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let x = a[t][j];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(p);
                for row in a.iter_mut() {
                    let v = row[t].checked_mul(q).ok_or(Overflow)?;
                    row[j] = row[j].checked_sub(v).ok_or(Overflow)?;
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|&x| x % p != 0));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t][t..cols].iter_mut().zip(&tail[0][t..cols]) {
                        *x = x.checked_add(*y).ok_or(Overflow)?;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    Ok(finish(diag))
}

fn finish(mut diag: Vec<i128>) -> Vec<i128> {
    diag.sort_unstable();
    diag
}

fn smallest_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                best = Some((x.abs(), i, j));
                if x.abs() == 1 {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// row[i] -= q * row[t]
fn axpy_row(a: &mut [Vec<i128>], i: usize, t: usize, q: i128) -> Result<(), Overflow> {
    let (lo, hi) = a.split_at_mut(i);
    let src = &lo[t];
    for (dst, &s) in hi[0].iter_mut().zip(src.iter()) {
        let v = s.checked_mul(q).ok_or(Overflow)?;
        *dst = dst.checked_sub(v).ok_or(Overflow)?;
    }
    Ok(())
}

/// Rank over the rationals of a dense matrix given by rows.
pub fn rank_q(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x -= y * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `target` is a rational linear combination of `generators`.
pub fn in_span(generators: &[Chain], target: &Chain) -> bool {
    if target.is_zero() {
        return true;
    }
    let mut index: BTreeMap<Simplex, usize> = BTreeMap::new();
    for s in generators.iter().flat_map(|g| g.simplices()).chain(target.simplices()) {
        let n = index.len();
        index.entry(s.clone()).or_insert(n);
    }
    let width = index.len();
    let dense = |c: &Chain| {
        let mut row = vec![Q::zero(); width];
        for (s, q) in c.terms() {
            row[index[s]] = q.clone();
        }
        row
    };
    let base: Vec<Vec<Q>> = generators.iter().map(dense).collect();
    let r0 = rank_q(base.clone());
    let mut ext = base;
    ext.push(dense(target));
    rank_q(ext) == r0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn diagonalizes_known_matrices() {
        assert_eq!(invariant_factors(vec![vec![2, 4], vec![6, 8]]).unwrap(), vec![2, 4]);
        assert_eq!(
            invariant_factors(vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 0]]).unwrap(),
            vec![1, 6]
        );
        assert_eq!(invariant_factors(vec![vec![0, 0]]).unwrap(), Vec::<i128>::new());
        assert_eq!(invariant_factors(vec![]).unwrap(), Vec::<i128>::new());
    }

    #[test]
    fn rational_rank() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank_q(m), 2);
    }
}
