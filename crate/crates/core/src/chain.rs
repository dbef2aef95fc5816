//! Sparse simplicial chains with exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::Simplex;
use crate::rational::{self, Q};

/// A formal sum of oriented simplices of one degree. Simplices are stored
/// ascending with the orientation sign absorbed into the coefficient; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Simplex, Q>,
}

impl Chain {
    pub fn zero(degree: usize) -> Chain {
        Chain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A single oriented simplex given as an ordered tuple.
    pub fn simplex(tuple: &[usize], coeff: Q) -> Chain {
        let mut c = Chain::zero(tuple.len().saturating_sub(1));
        c.add_oriented(tuple, coeff);
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &Q)> {
        self.terms.iter()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.terms.keys()
    }

    pub fn coeff(&self, s: &Simplex) -> Q {
        self.terms.get(s).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `coeff` times the oriented simplex `tuple`.
    ///
    /// Panics if the tuple repeats a vertex or has the wrong length.
    pub fn add_oriented(&mut self, tuple: &[usize], coeff: Q) {
        assert_eq!(tuple.len(), self.degree + 1, "simplex length must match degree");
        let (s, sign) = Simplex::from_ordered(tuple).expect("degenerate simplex in chain");
        let c = if sign > 0 { coeff } else { -coeff };
        self.add_term(s, c);
    }

    pub fn add_term(&mut self, s: Simplex, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(s);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c.abs())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(rational::is_integer)
    }

    /// Alternating-sum boundary. The boundary of a 0-chain is the zero
    /// 0-chain by convention (there is no degree -1 here).
    pub fn boundary(&self) -> Chain {
        if self.degree == 0 {
            return Chain::zero(0);
        }
        let mut out = Chain::zero(self.degree - 1);
        for (s, c) in &self.terms {
            for i in 0..s.len() {
                let term = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_term(s.face(i), term);
            }
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Chain {
        let mut out = Chain::zero(self.degree);
        if k.is_zero() {
            return out;
        }
        for (s, c) in &self.terms {
            out.terms.insert(s.clone(), c * k);
        }
        out
    }

    /// Relabels vertices. Panics if the map collapses a simplex.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (s, c) in &self.terms {
            let image: Vec<usize> = s.vertices().iter().map(|&v| f(v)).collect();
            out.add_oriented(&image, c.clone());
        }
        out
    }

    /// Keeps only terms whose simplex satisfies the predicate.
    pub fn restrict(&self, keep: impl Fn(&Simplex) -> bool) -> Chain {
        Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ChainDoc::from(self)).expect("chain serializes")
    }

    pub fn from_json(text: &str) -> Result<Chain, String> {
        let doc: ChainDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Chain::try_from(doc)
    }
}

impl Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        assert_eq!(self.degree, rhs.degree, "adding chains of different degree");
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        self + &(-rhs)
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(s, c)| (s.clone(), -c.clone())).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    simplex: Vec<usize>,
    coeff: String,
}

/// Wire form: `{"degree": k, "terms": [{"simplex": [..], "coeff": "p/q"}]}`.
#[derive(Serialize, Deserialize)]
pub struct ChainDoc {
    degree: usize,
    terms: Vec<TermDoc>,
}

impl From<&Chain> for ChainDoc {
    fn from(c: &Chain) -> Self {
        ChainDoc {
            degree: c.degree,
            terms: c
                .terms
                .iter()
                .map(|(s, q)| TermDoc {
                    simplex: s.vertices().to_vec(),
                    coeff: rational::to_string(q),
                })
                .collect(),
        }
    }
}

impl TryFrom<ChainDoc> for Chain {
    type Error = String;
    fn try_from(doc: ChainDoc) -> Result<Self, Self::Error> {
        let mut c = Chain::zero(doc.degree);
        for t in doc.terms {
            if t.simplex.len() != doc.degree + 1 {
                return Err(format!("simplex {:?} has wrong length", t.simplex));
            }
            if !t.simplex.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("simplex {:?} is not ascending", t.simplex));
            }
            let q = rational::parse(&t.coeff).ok_or_else(|| format!("bad coefficient {:?}", t.coeff))?;
            c.add_term(Simplex::from_sorted(t.simplex), q);
        }
        Ok(c)
    }
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChainDoc::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = ChainDoc::deserialize(d)?;
        Chain::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn boundary_of_triangle() {
        let c = Chain::simplex(&[0, 1, 2], q(1));
        let mut expected = Chain::zero(1);
        expected.add_oriented(&[1, 2], q(1));
        expected.add_oriented(&[0, 2], q(-1));
        expected.add_oriented(&[0, 1], q(1));
        assert_eq!(c.boundary(), expected);
        assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn orientation_absorbed() {
        let c = Chain::simplex(&[2, 1], q(3));
        assert_eq!(c.coeff(&Simplex::from_sorted(vec![1, 2])), q(-3));
    }

    #[test]
    fn l1_examples() {
        assert_eq!(Chain::zero(2).l1_norm(), q(0));
        let mut c = Chain::zero(1);
        c.add_oriented(&[0, 1], frac(1, 2));
        c.add_oriented(&[1, 2], frac(-1, 3));
        assert_eq!(c.l1_norm(), frac(5, 6));
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut c = Chain::simplex(&[0, 1], q(1));
        c.add_oriented(&[1, 0], q(1));
        assert!(c.is_zero());
    }

    #[test]
    fn wire_format() {
        let mut c = Chain::zero(1);
        c.add_oriented(&[1, 0], frac(1, 2));
        assert_eq!(
            c.to_json(),
            r#"{"degree":1,"terms":[{"simplex":[0,1],"coeff":"-1/2"}]}"#
        );
        assert_eq!(Chain::from_json(&c.to_json()).unwrap(), c);
        assert!(Chain::from_json(r#"{"degree":1,"terms":[{"simplex":[1,0],"coeff":"1"}]}"#).is_err());
    }
}
