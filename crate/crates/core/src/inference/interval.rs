use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Q};

/// Lower endpoint. `strict` marks an open endpoint at zero: the value is
/// known to be positive without a numeric bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lower {
    pub value: Q,
    pub strict: bool,
}

impl Lower {
    pub fn zero() -> Lower {
        Lower::at(Q::zero())
    }

    pub fn at(value: Q) -> Lower {
        Lower { value, strict: false }
    }

    pub fn positive() -> Lower {
        Lower {
            value: Q::zero(),
            strict: true,
        }
    }

    /// Strictness only carries information at zero.
    pub fn normalized(mut self) -> Lower {
        if self.value.is_positive() {
            self.strict = false;
        }
        self
    }

    pub fn is_positive(&self) -> bool {
        self.strict || self.value.is_positive()
    }

    pub fn add(&self, other: &Lower) -> Lower {
        Lower {
            value: &self.value + &other.value,
            strict: self.strict || other.strict,
        }
        .normalized()
    }

    /// `c ≥ 0`.
    pub fn scale(&self, c: &Q) -> Lower {
        if c.is_zero() {
            return Lower::zero();
        }
        Lower {
            value: &self.value * c,
            strict: self.strict,
        }
        .normalized()
    }

    pub fn mul(&self, other: &Lower) -> Lower {
        let value = &self.value * &other.value;
        let strict = self.is_positive() && other.is_positive();
        Lower { value, strict }.normalized()
    }

    /// `(x, open) ≻ (x, closed)`.
    pub fn key(&self) -> (&Q, bool) {
        (&self.value, self.strict)
    }
}

impl PartialOrd for Lower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lower {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A sub-interval of `[0, ∞]`. `hi = None` is the unknown (infinite) upper
/// end; every norm here is finite, so `0 · ∞ = 0` in upper-bound arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Lower,
    pub hi: Option<Q>,
}

impl Default for Interval {
    fn default() -> Self {
        Interval::unknown()
    }
}

impl Interval {
    pub fn unknown() -> Interval {
        Interval {
            lo: Lower::zero(),
            hi: None,
        }
    }

    pub fn zero() -> Interval {
        Interval::exact(Q::zero())
    }

    pub fn exact(x: Q) -> Interval {
        Interval {
            lo: Lower::at(x.clone()),
            hi: Some(x),
        }
    }

    pub fn new(lo: Lower, hi: Option<Q>) -> Interval {
        Interval {
            lo: lo.normalized(),
            hi,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.hi {
            None => false,
            Some(h) => self.lo.value > *h || (self.lo.strict && self.lo.value == *h),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact_value().is_some_and(|x| x.is_zero())
    }

    pub fn exact_value(&self) -> Option<&Q> {
        match &self.hi {
            Some(h) if !self.lo.strict && self.lo.value == *h => Some(h),
            _ => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo.strict {
            *x > self.lo.value
        } else {
            *x >= self.lo.value
        };
        above && self.hi.as_ref().is_none_or(|h| x <= h)
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Interval) -> bool {
        self.lo >= other.lo
            && match (&self.hi, &other.hi) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a <= b,
            }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo),
            hi: upper_add(&self.hi, &other.hi),
        }
    }

    pub fn scale(&self, c: &Q) -> Interval {
        Interval {
            lo: self.lo.scale(c),
            hi: upper_scale(&self.hi, c),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: upper_min(&self.hi, &other.hi),
        }
    }
}

pub(crate) fn upper_add(a: &Option<Q>, b: &Option<Q>) -> Option<Q> {
    Some(a.as_ref()? + b.as_ref()?)
}

pub(crate) fn upper_scale(a: &Option<Q>, c: &Q) -> Option<Q> {
    if c.is_zero() {
        return Some(Q::zero());
    }
    a.as_ref().map(|a| a * c)
}

pub(crate) fn upper_mul(a: &Option<Q>, b: &Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), _) if x.is_zero() => Some(Q::zero()),
        (_, Some(y)) if y.is_zero() => Some(Q::zero()),
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    }
}

pub(crate) fn upper_min(a: &Option<Q>, b: &Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo.strict { "(" } else { "[" };
        let hi = self.hi.as_ref().map_or("∞".to_string(), rational::display);
        write!(f, "{open}{}, {hi}]", rational::display(&self.lo.value))
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalDoc {
    lo: String,
    #[serde(default)]
    strict: bool,
    hi: Option<String>,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalDoc {
            lo: rational::to_string(&self.lo.value),
            strict: self.lo.strict,
            hi: self.hi.as_ref().map(rational::to_string),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = IntervalDoc::deserialize(d)?;
        let bad = |t: &str| serde::de::Error::custom(format!("bad rational {t:?}"));
        let lo = rational::parse(&doc.lo).ok_or_else(|| bad(&doc.lo))?;
        let hi = match &doc.hi {
            Some(t) => Some(rational::parse(t).ok_or_else(|| bad(t))?),
            None => None,
        };
        Ok(Interval::new(
            Lower {
                value: lo,
                strict: doc.strict,
            },
            hi,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn ordering_of_lower_ends() {
        assert!(Lower::positive() > Lower::zero());
        assert!(Lower::at(frac(1, 7)) > Lower::positive());
        assert_eq!(Lower::positive().add(&Lower::at(q(1))), Lower::at(q(1)));
    }

    #[test]
    fn emptiness() {
        assert!(Interval::new(Lower::positive(), Some(q(0))).is_empty());
        assert!(!Interval::zero().is_empty());
        assert!(Interval::new(Lower::at(q(2)), Some(q(1))).is_empty());
    }

    #[test]
    fn arithmetic() {
        let a = Interval::new(Lower::positive(), None);
        assert!(a.add(&Interval::zero()).is_positive());
        assert_eq!(upper_mul(&Some(q(0)), &None), Some(q(0)));
        assert_eq!(upper_mul(&Some(q(2)), &None), None);
        assert_eq!(Interval::exact(q(3)).scale(&frac(1, 3)), Interval::exact(q(1)));
    }

    #[test]
    fn display_and_json() {
        let i = Interval::new(Lower::at(frac(1, 7)), None);
        assert_eq!(i.to_string(), "[1/7, ∞]");
        assert_eq!(Interval::new(Lower::positive(), None).to_string(), "(0, ∞]");
        let back: Interval = serde_json::from_str(&serde_json::to_string(&i).unwrap()).unwrap();
        assert_eq!(back, i);
    }
}
