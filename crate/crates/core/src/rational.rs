//! Exact rational scalars and their `"p/q"` string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Always emits `p/q` with `q >= 1`, e.g. `1/1`, `-5/6`.
pub fn to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q` or a bare integer `p`. No decimals.
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let body = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Binomial coefficient as an exact rational.
pub fn binomial(n: u64, k: u64) -> Q {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

/// Compact human form: integers without denominator.
pub fn display(x: &Q) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        to_string(x)
    }
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod as_string {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse("5/6"), Some(frac(5, 6)));
        assert_eq!(parse("-3"), Some(q(-3)));
        assert_eq!(parse("2/4"), Some(frac(1, 2)));
        assert_eq!(parse("1.5"), None);
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("1/-2"), None);
        assert_eq!(to_string(&q(1)), "1/1");
        assert_eq!(to_string(&frac(-10, 12)), "-5/6");
        assert_eq!(display(&frac(14, 3)), "14/3");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(2, 1), q(2));
        assert_eq!(binomial(3, 1), q(3));
        assert_eq!(binomial(6, 2), q(15));
    }
}
