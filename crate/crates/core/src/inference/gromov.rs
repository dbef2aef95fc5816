use std::fmt;

use serde::Serialize;

use super::description::yes;
use super::{Handle, InferenceError, Interval, Link, Norm, Registry};

/// Outcome of testing `‖M,∂M‖ = 0 ⇒ χ(M,∂M) = 0` on one description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum GromovStatus {
    /// `sv = 0` and `χ = 0`.
    Holds,
    /// `sv > 0`, so the implication is empty.
    Vacuous,
    /// `sv = 0`, `χ ≠ 0`, and every hypothesis flag holds.
    CounterexampleCandidate,
    /// Some hypothesis flag is false.
    NonHypothesis {
        failing: Vec<String>,
    },
    Unknown,
}

impl GromovStatus {
    pub fn name(&self) -> &'static str {
        match self {
            GromovStatus::Holds => "holds",
            GromovStatus::Vacuous => "vacuous",
            GromovStatus::CounterexampleCandidate => "counterexample-candidate",
            GromovStatus::NonHypothesis { .. } => "non-hypothesis",
            GromovStatus::Unknown => "unknown",
        }
    }
}

impl fmt::Display for GromovStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GromovStatus::NonHypothesis { failing } => write!(f, "non-hypothesis ({})", failing.join(", ")),
            s => f.write_str(s.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GromovReport {
    pub manifold: String,
    pub relative: bool,
    pub status: GromovStatus,
    pub sv: Interval,
    pub chi: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Registry {
    /// Classifies a manifold against the (relative) Gromov implication.
    /// For closed manifolds the hypotheses are orientation, connectivity
    /// and asphericity; with boundary every component must also be
    /// aspherical and π₁-injective.
    pub fn gromov_check(&self, h: Handle) -> Result<GromovReport, InferenceError> {
        let s = self.state(h)?;
        let d = self.description(h);
        let relative = d.closed != Some(true);
        let sv = s.norm(Norm::Sv).clone();
        let chi = if relative { s.chi_rel } else { s.chi };
        let mut notes = Vec::new();
        let mut flags: Vec<(String, Option<bool>)> = vec![
            ("oriented".into(), d.oriented),
            ("connected".into(), d.connected),
            ("aspherical".into(), d.aspherical),
        ];
        if d.aspherical.is_none() {
            if let Some(note) = self.parity_products(h) {
                flags[2].1 = Some(true);
                notes.push(note);
            }
        }
        if d.closed.is_none() {
            flags.push(("compact-closed-or-bounded".into(), None));
        }
        for (k, r) in d.boundary.iter().enumerate() {
            let b = self.handle(&r.manifold)?;
            let asph = r.aspherical.or(self.description(b).aspherical);
            flags.push((format!("boundary[{k}].pi1_injective"), r.pi1_injective));
            flags.push((format!("boundary[{k}].aspherical"), asph));
        }
        let failing: Vec<String> = flags
            .iter()
            .filter(|(_, v)| *v == Some(false))
            .map(|(n, _)| n.clone())
            .collect();
        let label = if relative { "sv_rel" } else { "sv" };
        let chi_label = if relative { "chi_rel" } else { "chi" };
        let chi_text = chi.map_or("unknown".to_string(), |x| x.to_string());
        let status = if !failing.is_empty() {
            notes.push(format!("{label} = {sv}, {chi_label} = {chi_text}"));
            GromovStatus::NonHypothesis { failing }
        } else if sv.is_positive() {
            GromovStatus::Vacuous
        } else if sv.is_zero() && chi == Some(0) {
            GromovStatus::Holds
        } else if sv.is_zero() && chi.is_some() && flags.iter().all(|(_, v)| yes(*v)) {
            GromovStatus::CounterexampleCandidate
        } else {
            let unknown: Vec<&str> = flags
                .iter()
                .filter(|(_, v)| v.is_none())
                .map(|(n, _)| n.as_str())
                .collect();
            if !unknown.is_empty() {
                notes.push(format!("undeclared: {}", unknown.join(", ")));
            }
            GromovStatus::Unknown
        };
        Ok(GromovReport {
            manifold: d.name.clone(),
            relative,
            status,
            sv,
            chi,
            notes,
        })
    }

    /// Asphericity of `∂(M×N)` for aspherical `M`, `N` with π₁-injective
    /// aspherical boundary and dimensions of different parity.
    fn parity_products(&self, h: Handle) -> Option<String> {
        let (m, n) = self.node(h.0).boundary_of_product?;
        let good = |i: usize| {
            let d = &self.descs[i];
            d.closed == Some(false)
                && yes(d.oriented)
                && yes(d.connected)
                && yes(d.aspherical)
                && d.boundary.iter().all(|r| {
                    let asph = r
                        .aspherical
                        .or_else(|| self.index.get(&r.manifold).and_then(|&b| self.descs[b].aspherical));
                    yes(r.pi1_injective) && yes(asph)
                })
        };
        if !(good(m) && good(n) && (self.descs[m].dim + self.descs[n].dim) % 2 == 1) {
            return None;
        }
        let chi = |i: usize| self.tables.as_ref().and_then(|t| t.states[i].chi);
        let mut note = format!(
            "[R-parity-products] ∂({}×{}) aspherical: both factors aspherical with π₁-injective aspherical boundary",
            self.descs[m].name, self.descs[n].name
        );
        if let (Some(a), Some(b)) = (chi(m), chi(n)) {
            if a * b != 0 {
                note.push_str(&format!(
                    "; dimensions of different parity, χ(∂(M×N)) = 2·χ(M)·χ(N) = {}",
                    2 * a * b
                ));
            }
        }
        Some(note)
    }

    /// `min |χ(W)|` over the declared aspherical fillings of `target`.
    pub fn fill_chi(&self, target: Handle, fillings: &[Handle]) -> Result<u64, InferenceError> {
        if fillings.is_empty() {
            return Err(InferenceError::NoFillings);
        }
        let t = self.description(target);
        let mut best: Option<u64> = None;
        for &w in fillings {
            let d = self.description(w);
            let mut missing = Vec::new();
            if d.dim != t.dim + 1 {
                missing.push(format!("dim = {}", t.dim + 1));
            }
            if !yes(d.aspherical) {
                missing.push("aspherical".to_string());
            }
            if !yes(d.oriented) {
                missing.push("oriented".to_string());
            }
            match d.boundary.as_slice() {
                [r] if r.manifold == t.name => {
                    if !yes(r.pi1_injective) {
                        missing.push("boundary.pi1_injective".to_string());
                    }
                    if !yes(r.aspherical.or(t.aspherical)) {
                        missing.push("boundary.aspherical".to_string());
                    }
                }
                _ => missing.push(format!("boundary = [{}]", t.name)),
            }
            if !missing.is_empty() {
                return Err(InferenceError::MissingFlags(d.name.clone(), missing.join(", ")));
            }
            let chi = self
                .state(w)?
                .chi
                .ok_or_else(|| InferenceError::Mismatch(format!("χ({}) is unknown", d.name)))?;
            let v = chi.unsigned_abs();
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        Ok(best.expect("non-empty"))
    }

    /// Signature through orientation reversal, disjoint unions, connected
    /// sums and closed products, or as declared.
    pub fn signature(&self, h: Handle) -> Option<i64> {
        let d = self.description(h);
        if d.signature.is_some() {
            return d.signature;
        }
        match &self.node(h.0).link {
            Some(Link::Reversed(m)) => self.signature(Handle(*m)).map(|s| -s),
            Some(Link::Glue { pieces, .. }) => pieces.iter().map(|&p| self.signature(Handle(p))).sum(),
            Some(Link::ConnectedSum(a, b)) => Some(self.signature(Handle(*a))? + self.signature(Handle(*b))?),
            Some(Link::Product(fs)) if d.closed == Some(true) => {
                fs.iter().map(|&f| self.signature_or_zero(Handle(f))).product()
            }
            _ => None,
        }
    }

    fn signature_or_zero(&self, h: Handle) -> Option<i64> {
        if !self.description(h).dim.is_multiple_of(4) {
            Some(0)
        } else {
            self.signature(h)
        }
    }
}
