//! Machine-checkable upper-bound certificates for simplicial volumes and an
//! append-only ledger of them.
//!
//! Explicit witnesses are fundamental cycles on a named complex; derived
//! witnesses (doubles, stable cover lists) re-verify by replaying the
//! construction and its arithmetic.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::Chain;
use crate::complex::Complex;
use crate::constructions::{self, cyclic_cover, Cocycle, ConstructionError, CoverSpec};
use crate::datasets;
use crate::manifold::{manifold_check, ManifoldComplex, ManifoldError};
use crate::rational::{self, binomial, q, Q};
use crate::snf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    Real,
    Integral,
    RelativeReal,
    RelativeIntegral,
    StableIntegral,
}

impl NormKind {
    pub const ALL: [NormKind; 5] = [
        NormKind::Real,
        NormKind::Integral,
        NormKind::RelativeReal,
        NormKind::RelativeIntegral,
        NormKind::StableIntegral,
    ];

    pub fn is_integral(self) -> bool {
        matches!(
            self,
            NormKind::Integral | NormKind::RelativeIntegral | NormKind::StableIntegral
        )
    }

    pub fn is_relative(self) -> bool {
        matches!(self, NormKind::RelativeReal | NormKind::RelativeIntegral)
    }

    /// The kind of the same coefficients on a closed manifold.
    pub fn absolute(self) -> NormKind {
        match self {
            NormKind::RelativeReal => NormKind::Real,
            NormKind::RelativeIntegral => NormKind::Integral,
            k => k,
        }
    }

    fn for_manifold(integral: bool, closed: bool) -> NormKind {
        match (integral, closed) {
            (true, true) => NormKind::Integral,
            (true, false) => NormKind::RelativeIntegral,
            (false, true) => NormKind::Real,
            (false, false) => NormKind::RelativeReal,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            NormKind::Real => "‖·‖",
            NormKind::Integral => "‖·‖_Z",
            NormKind::RelativeReal => "‖·,∂·‖",
            NormKind::RelativeIntegral => "‖·,∂·‖_Z",
            NormKind::StableIntegral => "‖·‖_Z^∞",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormKind::Real => "real",
            NormKind::Integral => "integral",
            NormKind::RelativeReal => "relative-real",
            NormKind::RelativeIntegral => "relative-integral",
            NormKind::StableIntegral => "stable-integral",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub manifold: String,
    pub kind: NormKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "rule")]
pub enum Witness {
    Explicit {
        complex: Complex,
        chain: Chain,
    },
    /// The reflection c ↦ c + c̄ applied to a relative certificate.
    Double {
        input: Box<Certificate>,
    },
    /// Integral certificates of finite connected cyclic covers of `base`.
    StableCovers {
        base: Complex,
        covers: Vec<CoverEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEntry {
    pub degree: usize,
    /// `[u, v, value]` triples of the edge cocycle on the base.
    pub cocycle: Vec<(usize, usize, i64)>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub target: Target,
    #[serde(with = "rational::as_string")]
    pub bound: Q,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("expected a relative certificate, got {0}")]
    NotRelative(NormKind),
    #[error("certificate for `{0}` needs an explicit witness")]
    NotExplicit(String),
    #[error("empty cover list")]
    EmptyCovers,
    #[error("cover certificate for `{0}` is {1}, not integral")]
    NotIntegral(String, NormKind),
    #[error("degree-{0} cover is disconnected")]
    DisconnectedCover(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
}

/// Outcome of [`verify`]: pass, or the first violated condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "reason")]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl Certificate {
    pub fn explicit(&self) -> Option<(&Complex, &Chain)> {
        match &self.witness {
            Witness::Explicit { complex, chain } => Some((complex, chain)),
            _ => None,
        }
    }

    pub fn with_target_name(mut self, name: impl Into<String>) -> Certificate {
        self.target.manifold = name.into();
        self
    }
}

/// The coherent facet sum as an integral certificate, plus the real
/// certificate with the same witness.
pub fn certify_from_triangulation(m: &ManifoldComplex) -> Result<(Certificate, Certificate), CertError> {
    m.require_connected()?;
    let chain = m.fundamental_cycle();
    let bound = chain.l1_norm();
    let make = |integral: bool| Certificate {
        target: Target {
            manifold: m.name().to_string(),
            kind: NormKind::for_manifold(integral, m.is_closed()),
        },
        bound: bound.clone(),
        witness: Witness::Explicit {
            complex: m.complex().clone(),
            chain: chain.clone(),
        },
    };
    Ok((make(true), make(false)))
}

/// ∂ of a relative witness, as a certificate for the boundary.
pub fn boundary_bound(cert: &Certificate) -> Result<Certificate, CertError> {
    if !cert.target.kind.is_relative() {
        return Err(CertError::NotRelative(cert.target.kind));
    }
    let (complex, chain) = cert
        .explicit()
        .ok_or_else(|| CertError::NotExplicit(cert.target.manifold.clone()))?;
    let m = manifold_check(complex)?;
    if m.is_closed() {
        return Err(ConstructionError::Closed(complex.name().to_string()).into());
    }
    let boundary = m
        .boundary_complex()
        .ok_or_else(|| CertError::Unsupported("boundaries of 1-manifolds are signed points".into()))?;
    let c = chain.boundary();
    let bound = c.l1_norm();
    debug_assert!(bound <= q(m.dim() as i64 + 1) * &cert.bound);
    Ok(Certificate {
        target: Target {
            manifold: format!("∂{}", cert.target.manifold),
            kind: cert.target.kind.absolute(),
        },
        bound,
        witness: Witness::Explicit {
            complex: boundary,
            chain: c,
        },
    })
}

/// ‖D(M)‖ ≤ 2·‖M,∂M‖ for the same coefficients.
pub fn double_bound(cert: &Certificate) -> Result<Certificate, CertError> {
    if !cert.target.kind.is_relative() {
        return Err(CertError::NotRelative(cert.target.kind));
    }
    Ok(Certificate {
        target: Target {
            manifold: format!("D({})", cert.target.manifold),
            kind: cert.target.kind.absolute(),
        },
        bound: q(2) * &cert.bound,
        witness: Witness::Double {
            input: Box::new(cert.clone()),
        },
    })
}

/// Shuffle product of two explicit witnesses on the product triangulation.
pub fn product_bound(cm: &Certificate, cn: &Certificate) -> Result<Certificate, CertError> {
    let (km, zm) = cm
        .explicit()
        .ok_or_else(|| CertError::NotExplicit(cm.target.manifold.clone()))?;
    let (kn, zn) = cn
        .explicit()
        .ok_or_else(|| CertError::NotExplicit(cn.target.manifold.clone()))?;
    let name = format!("{}×{}", cm.target.manifold, cn.target.manifold);
    let p = constructions::product(km, kn, &name)?;
    let chain = p.shuffle(zm, zn);
    let relative = cm.target.kind.is_relative() || cn.target.kind.is_relative();
    let integral = cm.target.kind.is_integral() && cn.target.kind.is_integral();
    let (a, b) = (km.dim() as u64, kn.dim() as u64);
    let bound = binomial(a + b, a) * &cm.bound * &cn.bound;
    Ok(Certificate {
        target: Target {
            manifold: name,
            kind: NormKind::for_manifold(integral, !relative),
        },
        bound,
        witness: Witness::Explicit {
            complex: p.complex,
            chain,
        },
    })
}

/// Integral certificate for a connected cyclic cover. A closed surface
/// cover whose Euler characteristic matches a shipped model is
/// re-presented by that model.
pub fn certify_cover(base: &ManifoldComplex, cocycle: &Cocycle, degree: usize) -> Result<CoverEntry, CertError> {
    let name = format!("{}~{degree}", base.name());
    let cover = cyclic_cover(
        &CoverSpec {
            base: base.clone(),
            cocycle: cocycle.clone(),
            degree,
        },
        &name,
    )?;
    if !cover.manifold.is_connected() {
        return Err(CertError::DisconnectedCover(degree));
    }
    let model = (cover.manifold.dim() == 2 && cover.manifold.is_closed())
        .then(|| datasets::closed_surface_model(cover.manifold.euler_characteristic()))
        .flatten()
        .map(|c| manifold_check(&c))
        .transpose()?;
    let source = model.as_ref().unwrap_or(&cover.manifold);
    let (integral, _) = certify_from_triangulation(source)?;
    Ok(CoverEntry {
        degree,
        cocycle: cocycle.entries().collect(),
        certificate: integral.with_target_name(name),
    })
}

/// ‖M‖_Z^∞ ≤ min over the listed covers of ‖N‖_Z / deg.
pub fn cover_stable_bound(base: &ManifoldComplex, covers: Vec<CoverEntry>) -> Result<Certificate, CertError> {
    if covers.is_empty() {
        return Err(CertError::EmptyCovers);
    }
    for e in &covers {
        if !e.certificate.target.kind.is_integral() {
            return Err(CertError::NotIntegral(
                e.certificate.target.manifold.clone(),
                e.certificate.target.kind,
            ));
        }
        let cover = cyclic_cover(
            &CoverSpec {
                base: base.clone(),
                cocycle: Cocycle::new(e.cocycle.iter().map(|&(u, v, x)| ((u, v), x))),
                degree: e.degree,
            },
            "cover",
        )?;
        if !cover.manifold.is_connected() {
            return Err(CertError::DisconnectedCover(e.degree));
        }
    }
    let bound = covers
        .iter()
        .map(|e| &e.certificate.bound / q(e.degree as i64))
        .min()
        .expect("non-empty");
    Ok(Certificate {
        target: Target {
            manifold: base.name().to_string(),
            kind: NormKind::StableIntegral,
        },
        bound,
        witness: Witness::StableCovers {
            base: base.complex().clone(),
            covers,
        },
    })
}

/// Full re-verification; failures are reported, never raised.
pub fn verify(cert: &Certificate) -> Verdict {
    match check(cert) {
        Ok(()) => Verdict::Pass,
        Err(reason) => Verdict::Fail(reason),
    }
}

fn check(cert: &Certificate) -> Result<(), String> {
    if cert.bound < Q::zero() {
        return Err("negative bound".into());
    }
    match &cert.witness {
        Witness::Explicit { complex, chain } => check_explicit(cert, complex, chain),
        Witness::Double { input } => check_double(cert, input),
        Witness::StableCovers { base, covers } => check_stable(cert, base, covers),
    }
}

fn check_explicit(cert: &Certificate, complex: &Complex, chain: &Chain) -> Result<(), String> {
    let kind = cert.target.kind;
    if kind == NormKind::StableIntegral {
        return Err("stable-integral certificates need a cover derivation".into());
    }
    let m = manifold_check(complex).map_err(|e| format!("witness complex: {e}"))?;
    if kind.is_relative() == m.is_closed() {
        return Err(format!(
            "{kind} certificate on a {} complex",
            if m.is_closed() { "closed" } else { "bounded" }
        ));
    }
    if chain.degree() != m.dim() {
        return Err(format!("witness has degree {}, expected {}", chain.degree(), m.dim()));
    }
    if let Some(s) = chain.simplices().find(|s| !complex.contains(s)) {
        return Err(format!("simplex {s} not in complex"));
    }
    if kind.is_integral() && !chain.is_integral() {
        return Err("integral certificate has non-integer coefficients".into());
    }
    let boundary = chain.boundary();
    let in_boundary = |s: &crate::complex::Simplex| m.boundary_components().iter().any(|b| b.complex().contains(s));
    if m.dim() > 0 {
        if let Some(s) = boundary.simplices().find(|s| !in_boundary(s)) {
            return Err(format!("nonzero boundary at {s}"));
        }
    }
    // witness − ±reference must lie in ∂C_{n+1} + C_n(∂M), per component
    let n = m.dim();
    let mut generators: Vec<Chain> = complex
        .simplices(n + 1)
        .iter()
        .map(|s| Chain::simplex(s.vertices(), q(1)).boundary())
        .collect();
    for b in m.boundary_components() {
        generators.extend(
            b.complex()
                .simplices(n)
                .iter()
                .map(|s| Chain::simplex(s.vertices(), q(1))),
        );
    }
    for (i, reference) in m.component_cycles().iter().enumerate() {
        let part = chain.restrict(|s| reference.coeff(s) != Q::zero());
        let fits = |sign: i64| snf::in_span(&generators, &(&part - &reference.scale(&q(sign))));
        if !fits(1) && !fits(-1) {
            return Err(format!(
                "witness does not represent the fundamental class on component {i}"
            ));
        }
    }
    let norm = chain.l1_norm();
    if norm != cert.bound {
        return Err(format!(
            "norm mismatch: witness has ℓ¹-norm {}, bound claims {}",
            rational::display(&norm),
            rational::display(&cert.bound)
        ));
    }
    Ok(())
}

fn check_double(cert: &Certificate, input: &Certificate) -> Result<(), String> {
    if !input.target.kind.is_relative() {
        return Err(format!("double of a {} certificate", input.target.kind));
    }
    if cert.target.kind != input.target.kind.absolute() {
        return Err(format!(
            "double of {} must be {}",
            input.target.kind,
            input.target.kind.absolute()
        ));
    }
    if let Verdict::Fail(r) = verify(input) {
        return Err(format!("input: {r}"));
    }
    if cert.bound != q(2) * &input.bound {
        return Err(format!(
            "norm mismatch: double claims {}, twice the input is {}",
            rational::display(&cert.bound),
            rational::display(&(q(2) * &input.bound))
        ));
    }
    if let Some((complex, _)) = input.explicit() {
        let m = manifold_check(complex).map_err(|e| e.to_string())?;
        constructions::double(&m, "D").map_err(|e| format!("replaying the double: {e}"))?;
    }
    Ok(())
}

fn same_top_simplices(a: &Complex, b: &Complex) -> bool {
    a.dim() == b.dim() && a.simplices(a.dim()) == b.simplices(b.dim())
}

fn check_stable(cert: &Certificate, base: &Complex, covers: &[CoverEntry]) -> Result<(), String> {
    if cert.target.kind != NormKind::StableIntegral {
        return Err("cover derivation must certify a stable-integral bound".into());
    }
    if covers.is_empty() {
        return Err("empty cover list".into());
    }
    let m = manifold_check(base).map_err(|e| format!("base: {e}"))?;
    let expected_kind = NormKind::for_manifold(true, m.is_closed());
    let mut best: Option<Q> = None;
    for e in covers {
        let spec = CoverSpec {
            base: m.clone(),
            cocycle: Cocycle::new(e.cocycle.iter().map(|&(u, v, x)| ((u, v), x))),
            degree: e.degree,
        };
        let cover = cyclic_cover(&spec, "cover").map_err(|err| format!("degree {}: {err}", e.degree))?;
        if !cover.manifold.is_connected() {
            return Err(format!("degree-{} cover is disconnected", e.degree));
        }
        let c = &e.certificate;
        if c.target.kind != expected_kind {
            return Err(format!(
                "degree-{} entry is {}, expected {expected_kind}",
                e.degree, c.target.kind
            ));
        }
        if let Verdict::Fail(r) = verify(c) {
            return Err(format!("degree-{} entry: {r}", e.degree));
        }
        let (complex, _) = c.explicit().ok_or("cover entries need explicit witnesses")?;
        if !same_top_simplices(complex, cover.manifold.complex()) {
            let model = manifold_check(complex).map_err(|err| err.to_string())?;
            let recognized = cover.manifold.dim() == 2
                && cover.manifold.is_closed()
                && model.dim() == 2
                && model.is_closed()
                && model.is_connected()
                && model.euler_characteristic() == cover.manifold.euler_characteristic();
            if !recognized {
                return Err(format!(
                    "degree-{} witness is neither the cover nor a recognized model",
                    e.degree
                ));
            }
        }
        let ratio = &c.bound / q(e.degree as i64);
        best = Some(match best {
            Some(b) if b <= ratio => b,
            _ => ratio,
        });
    }
    let best = best.expect("non-empty");
    if best != cert.bound {
        return Err(format!(
            "norm mismatch: bound {} but the best cover ratio is {}",
            rational::display(&cert.bound),
            rational::display(&best)
        ));
    }
    Ok(())
}

/// Append-only certificate store. Appends are verified first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    certificates: Vec<Certificate>,
}

impl Ledger {
    pub fn new() -> Ledger {
        Ledger::default()
    }

    pub fn append(&mut self, cert: Certificate) -> Result<usize, CertError> {
        if let Verdict::Fail(reason) = verify(&cert) {
            return Err(CertError::Rejected(reason));
        }
        self.certificates.push(cert);
        Ok(self.certificates.len() - 1)
    }

    pub fn certificates(&self) -> &[Certificate] {
        &self.certificates
    }

    pub fn len(&self) -> usize {
        self.certificates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty()
    }

    /// Smallest certified bound for the kind; integral certificates also
    /// bound the real norm of the same target.
    pub fn best(&self, manifold: &str, kind: NormKind) -> Option<&Certificate> {
        self.certificates
            .iter()
            .filter(|c| c.target.manifold == manifold)
            .filter(|c| {
                c.target.kind == kind
                    || (kind == NormKind::Real && c.target.kind == NormKind::Integral)
                    || (kind == NormKind::RelativeReal && c.target.kind == NormKind::RelativeIntegral)
            })
            .min_by(|a, b| a.bound.cmp(&b.bound))
    }

    pub fn verify_all(&self) -> Vec<Verdict> {
        self.certificates.iter().map(verify).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes")
    }

    /// Parses a ledger without verifying it; see [`Ledger::verify_all`].
    pub fn from_json(text: &str) -> Result<Ledger, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::rational::frac;

    fn mc(c: Complex) -> ManifoldComplex {
        manifold_check(&c).unwrap()
    }

    #[test]
    fn triangulation_certificates() {
        let (s, r) = certify_from_triangulation(&mc(datasets::sphere(2))).unwrap();
        assert_eq!(s.bound, q(4));
        assert_eq!(s.target.kind, NormKind::Integral);
        assert_eq!(r.target.kind, NormKind::Real);
        assert!(verify(&s).is_pass());
        let (p, _) = certify_from_triangulation(&mc(datasets::punctured_torus())).unwrap();
        assert_eq!(p.bound, q(13));
        assert_eq!(p.target.kind, NormKind::RelativeIntegral);
        assert!(verify(&p).is_pass());
    }

    #[test]
    fn tampering_detected() {
        let (mut p, _) = certify_from_triangulation(&mc(datasets::punctured_torus())).unwrap();
        p.bound = q(12);
        assert!(matches!(verify(&p), Verdict::Fail(r) if r.starts_with("norm mismatch")));
        let (mut t, _) = certify_from_triangulation(&mc(datasets::torus7())).unwrap();
        if let Witness::Explicit { chain, .. } = &mut t.witness {
            let s = chain.simplices().next().unwrap().clone();
            chain.add_term(s, q(-1));
        }
        t.bound = q(13);
        assert!(matches!(verify(&t), Verdict::Fail(r) if r.starts_with("nonzero boundary")));
    }

    #[test]
    fn boundary_of_annulus() {
        let (a, _) = certify_from_triangulation(&mc(datasets::annulus())).unwrap();
        let b = boundary_bound(&a).unwrap();
        assert_eq!(b.bound, q(6));
        assert!(verify(&b).is_pass());
        let (t, _) = certify_from_triangulation(&mc(datasets::torus7())).unwrap();
        assert!(boundary_bound(&t).is_err());
    }

    #[test]
    fn doubles_and_products() {
        let (p, _) = certify_from_triangulation(&mc(datasets::punctured_torus())).unwrap();
        let d = double_bound(&p).unwrap();
        assert_eq!(d.bound, q(26));
        assert!(verify(&d).is_pass());
        let (c, _) = certify_from_triangulation(&mc(datasets::sphere(1))).unwrap();
        let t = product_bound(&c, &c).unwrap();
        assert_eq!(t.bound, q(18));
        assert!(verify(&t).is_pass());
        let (i, _) = certify_from_triangulation(&mc(datasets::delta(1))).unwrap();
        let a = product_bound(&i, &c).unwrap();
        assert_eq!(a.bound, q(6));
        assert_eq!(a.target.kind, NormKind::RelativeIntegral);
        assert!(verify(&a).is_pass());
    }

    #[test]
    fn stable_covers_of_torus() {
        let t = mc(datasets::torus7());
        let meridian = datasets::cocycle(t.complex(), "meridian").unwrap();
        let mut covers = Vec::new();
        let mut last = None;
        for (d, expected) in [(1, q(14)), (2, q(7)), (3, frac(14, 3)), (5, frac(14, 5)), (7, q(2))] {
            covers.push(certify_cover(&t, &meridian, d).unwrap());
            let c = cover_stable_bound(&t, covers.clone()).unwrap();
            assert_eq!(c.bound, expected);
            assert!(verify(&c).is_pass());
            if let Some(prev) = last {
                assert!(c.bound <= prev);
            }
            last = Some(c.bound.clone());
        }
        assert_eq!(cover_stable_bound(&t, vec![]).unwrap_err(), CertError::EmptyCovers);
    }

    #[test]
    fn ledger_round_trip() {
        let mut l = Ledger::new();
        let (s, r) = certify_from_triangulation(&mc(datasets::torus7())).unwrap();
        l.append(s).unwrap();
        l.append(r).unwrap();
        let back = Ledger::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l);
        assert!(back.verify_all().iter().all(Verdict::is_pass));
        assert_eq!(l.best("Torus7", NormKind::Real).unwrap().bound, q(14));
    }
}
