use serde::{Deserialize, Serialize};

/// A declared boundary component. Flags are tri-state: `None` is unknown.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryRef {
    pub manifold: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_injective: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_surjective: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aspherical: Option<bool>,
}

impl BoundaryRef {
    pub fn new(manifold: impl Into<String>) -> BoundaryRef {
        BoundaryRef {
            manifold: manifold.into(),
            ..BoundaryRef::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fibration {
    pub fiber: String,
    pub base: String,
}

/// A boundary component of one glued piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Port {
    pub piece: usize,
    pub component: usize,
}

/// How a description arose from registered ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Origin {
    Double {
        of: String,
    },
    ConnectedSum {
        left: String,
        right: String,
    },
    Product {
        factors: Vec<String>,
    },
    /// Pairwise identification of boundary components. No pairs means a
    /// disjoint union.
    Glue {
        pieces: Vec<String>,
        pairs: Vec<(Port, Port)>,
    },
    /// A finite connected cover of the given degree.
    Cover {
        base: String,
        degree: u64,
    },
    Reversed {
        of: String,
    },
}

/// Declared hypotheses about a compact manifold. Every flag is tri-state;
/// rules fire only on `Some(true)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Description {
    pub name: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oriented: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aspherical: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<BoundaryRef>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amenable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residually_finite: Option<bool>,
    /// π₁ is non-elementary (relatively) hyperbolic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperbolic_group: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lex: Option<bool>,
    /// π₁ is boundedly acyclic up to degree `dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundedly_acyclic: Option<bool>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amcat_upper: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_map_degree: Option<i64>,

    /// Closed: hyperbolic metric. With boundary: compactified complete
    /// finite-volume hyperbolic interior.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperbolic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_curvature: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locally_symmetric: Option<bool>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1_action: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_structure: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affine_translation: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_manifold: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping_torus: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub co_amenable_subcomplex: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_amenable_cover: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibre: Option<Fibration>,

    /// Signature; only meaningful in dimensions divisible by 4 (and 0, where
    /// it is the signed point count).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_rel: Option<i64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
}

impl Description {
    pub fn new(name: impl Into<String>, dim: usize) -> Description {
        Description {
            name: name.into(),
            dim,
            ..Description::default()
        }
    }

    /// Closed, oriented and connected.
    pub fn closed_manifold(name: impl Into<String>, dim: usize) -> Description {
        Description {
            closed: Some(true),
            oriented: Some(true),
            connected: Some(true),
            ..Description::new(name, dim)
        }
    }

    /// Oriented and connected with the given boundary components.
    pub fn bounded_manifold(name: impl Into<String>, dim: usize, boundary: Vec<BoundaryRef>) -> Description {
        Description {
            closed: Some(false),
            oriented: Some(true),
            connected: Some(true),
            boundary,
            ..Description::new(name, dim)
        }
    }
}

pub(crate) fn yes(x: Option<bool>) -> bool {
    x == Some(true)
}

/// Tri-state conjunction.
pub(crate) fn and(xs: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    let mut all = true;
    for x in xs {
        match x {
            Some(false) => return Some(false),
            None => all = false,
            Some(true) => {}
        }
    }
    all.then_some(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_rejects_unknown_keys() {
        let ok: Description = serde_json::from_str(r#"{"name":"T","dim":2,"amenable":true}"#).unwrap();
        assert_eq!(ok.amenable, Some(true));
        assert!(serde_json::from_str::<Description>(r#"{"name":"T","dim":2,"amenabel":true}"#).is_err());
    }

    #[test]
    fn tri_state_and() {
        assert_eq!(and([Some(true), Some(true)]), Some(true));
        assert_eq!(and([Some(true), None]), None);
        assert_eq!(and([None, Some(false)]), Some(false));
    }
}
