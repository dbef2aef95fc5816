//! Descriptions of constructed manifolds, with flags derived from the
//! inputs wherever they are inherited.

use super::description::{and, BoundaryRef, Description, Origin, Port};
use super::{Handle, InferenceError, Registry};

/// A construction over registered manifolds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Double(String),
    ConnectedSum(String, String),
    Product(Vec<String>),
    /// Pairwise glueing of boundary components. In the amenable category
    /// the pieces' boundaries are amenable and π₁-injective by fiat.
    Glue {
        pieces: Vec<String>,
        pairs: Vec<(Port, Port)>,
        amenable: bool,
    },
    Cover(String, u64),
    Reversed(String),
}

impl Registry {
    /// Registers a construction with derived flags.
    pub fn add_construction(&mut self, name: &str, c: &Construction) -> Result<Handle, InferenceError> {
        let d = self.derive(name, c)?;
        self.add_manifold(d)
    }

    /// Description of a construction. Boundary components that do not yet
    /// exist (those of products) are registered on the way; the caller
    /// registers the returned description, possibly with a triangulation.
    pub fn derive(&mut self, name: &str, c: &Construction) -> Result<Description, InferenceError> {
        if self.contains(name) {
            return Err(InferenceError::Duplicate(name.to_string()));
        }
        let invalid = |m: String| InferenceError::Invalid(name.to_string(), m);
        Ok(match c {
            Construction::Double(of) => {
                let m = self.description(self.handle(of)?).clone();
                if m.boundary.is_empty() {
                    return Err(invalid(format!("`{of}` has empty boundary")));
                }
                Description {
                    closed: Some(true),
                    oriented: m.oriented,
                    connected: m.connected,
                    origin: Some(Origin::Double { of: of.clone() }),
                    ..Description::new(name, m.dim)
                }
            }
            Construction::Reversed(of) => {
                let m = self.description(self.handle(of)?).clone();
                Description {
                    name: name.to_string(),
                    chi: None,
                    chi_rel: None,
                    signature: m.signature.map(|s| -s),
                    origin: Some(Origin::Reversed { of: of.clone() }),
                    ..m
                }
            }
            Construction::ConnectedSum(a, b) => {
                let (x, y) = (
                    self.description(self.handle(a)?).clone(),
                    self.description(self.handle(b)?).clone(),
                );
                if x.dim != y.dim || x.closed != Some(true) || y.closed != Some(true) {
                    return Err(invalid("connected sums need closed manifolds of one dimension".into()));
                }
                let aspherical =
                    (x.dim >= 3 && x.aspherical == Some(true) && y.aspherical == Some(true)).then_some(false);
                Description {
                    closed: Some(true),
                    oriented: and([x.oriented, y.oriented]),
                    connected: and([x.connected, y.connected]),
                    aspherical,
                    signature: x.signature.zip(y.signature).map(|(s, t)| s + t),
                    origin: Some(Origin::ConnectedSum {
                        left: a.clone(),
                        right: b.clone(),
                    }),
                    ..Description::new(name, x.dim)
                }
            }
            Construction::Product(factors) => self.derive_product(name, factors)?,
            Construction::Glue {
                pieces,
                pairs,
                amenable,
            } => self.derive_glue(name, pieces, pairs, *amenable, true)?,
            Construction::Cover(base, degree) => {
                let b = self.description(self.handle(base)?).clone();
                if b.closed != Some(true) {
                    return Err(invalid("covers are only modelled over closed bases".into()));
                }
                Description {
                    closed: Some(true),
                    oriented: b.oriented,
                    connected: Some(true),
                    aspherical: b.aspherical,
                    amenable: b.amenable,
                    residually_finite: b.residually_finite,
                    hyperbolic_group: b.hyperbolic_group,
                    hyperbolic: b.hyperbolic,
                    negative_curvature: b.negative_curvature,
                    locally_symmetric: b.locally_symmetric,
                    graph_manifold: b.graph_manifold,
                    origin: Some(Origin::Cover {
                        base: base.clone(),
                        degree: *degree,
                    }),
                    ..Description::new(name, b.dim)
                }
            }
        })
    }

    fn derive_product(&mut self, name: &str, factors: &[String]) -> Result<Description, InferenceError> {
        let hs = factors.iter().map(|f| self.handle(f)).collect::<Result<Vec<_>, _>>()?;
        if hs.len() < 2 {
            return Err(InferenceError::Invalid(
                name.into(),
                "a product needs two factors".into(),
            ));
        }
        let ds: Vec<Description> = hs.iter().map(|&h| self.description(h).clone()).collect();
        let dim = ds.iter().map(|d| d.dim).sum();
        let bounded: Vec<usize> = (0..ds.len()).filter(|&k| !ds[k].boundary.is_empty()).collect();
        let mut boundary = Vec::new();
        match bounded.as_slice() {
            [] => {}
            &[k] => {
                for (j, r) in ds[k].boundary.iter().enumerate() {
                    let part = self.handle(&r.manifold)?;
                    let pd = self.description(part).clone();
                    let mut fs = factors.to_vec();
                    fs[k] = r.manifold.clone();
                    let bname = format!("∂{name}[{j}]");
                    let others =
                        |f: fn(&Description) -> Option<bool>| and((0..ds.len()).filter(|&x| x != k).map(|x| f(&ds[x])));
                    let bd = Description {
                        closed: Some(true),
                        oriented: and([others(|d| d.oriented), pd.oriented]),
                        connected: and([others(|d| d.connected), pd.connected]),
                        aspherical: and([others(|d| d.aspherical), r.aspherical.or(pd.aspherical)]),
                        amenable: and([others(|d| d.amenable), pd.amenable]),
                        origin: Some(Origin::Product { factors: fs }),
                        ..Description::new(bname.clone(), dim - 1)
                    };
                    let aspherical = bd.aspherical;
                    self.add_manifold(bd)?;
                    boundary.push(BoundaryRef {
                        manifold: bname,
                        pi1_injective: r.pi1_injective,
                        pi1_surjective: r.pi1_surjective,
                        aspherical,
                    });
                }
            }
            _ => {
                let bname = format!("∂{name}");
                let connected = and(ds.iter().map(|d| d.connected));
                self.add_manifold(Description {
                    closed: Some(true),
                    oriented: and(ds.iter().map(|d| d.oriented)),
                    connected,
                    ..Description::new(bname.clone(), dim - 1)
                })?;
                boundary.push(BoundaryRef::new(bname.clone()));
                if let [m, n] = hs[..] {
                    let b = self.handle(&bname)?;
                    self.nodes[b.0].boundary_of_product = Some((m.0, n.0));
                }
            }
        }
        Ok(Description {
            closed: Some(boundary.is_empty()),
            oriented: and(ds.iter().map(|d| d.oriented)),
            connected: and(ds.iter().map(|d| d.connected)),
            aspherical: and(ds.iter().map(|d| d.aspherical)),
            amenable: and(ds.iter().map(|d| d.amenable)),
            residually_finite: and(ds.iter().map(|d| d.residually_finite)),
            boundary,
            origin: Some(Origin::Product {
                factors: factors.to_vec(),
            }),
            ..Description::new(name, dim)
        })
    }

    /// Glue description for pieces whose seams the caller has already
    /// matched, e.g. by an orientation-reversing simplicial isomorphism, so
    /// the glued components need not share a label.
    pub fn derive_matched_glue(
        &self,
        name: &str,
        pieces: &[String],
        pairs: &[(Port, Port)],
    ) -> Result<Description, InferenceError> {
        if self.contains(name) {
            return Err(InferenceError::Duplicate(name.to_string()));
        }
        self.derive_glue(name, pieces, pairs, false, false)
    }

    fn derive_glue(
        &self,
        name: &str,
        pieces: &[String],
        pairs: &[(Port, Port)],
        amenable: bool,
        check_labels: bool,
    ) -> Result<Description, InferenceError> {
        let invalid = |m: String| InferenceError::Invalid(name.to_string(), m);
        let ds = pieces
            .iter()
            .map(|p| self.handle(p).map(|h| self.description(h).clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let dim = ds.first().map(|d| d.dim).ok_or_else(|| invalid("no pieces".into()))?;
        let mut used = std::collections::BTreeSet::new();
        for &(a, b) in pairs {
            for p in [a, b] {
                let ok = ds.get(p.piece).is_some_and(|d| p.component < d.boundary.len());
                if !ok {
                    return Err(invalid(format!("no boundary component {}.b{}", p.piece, p.component)));
                }
                used.insert(p);
            }
            let (ra, rb) = (&ds[a.piece].boundary[a.component], &ds[b.piece].boundary[b.component]);
            let (ha, hb) = (self.handle(&ra.manifold)?, self.handle(&rb.manifold)?);
            if check_labels && !self.same_up_to_orientation(ha, hb) {
                return Err(invalid(format!("cannot glue `{}` to `{}`", ra.manifold, rb.manifold)));
            }
        }
        let seams_injective = amenable
            || pairs
                .iter()
                .flat_map(|(a, b)| [a, b])
                .all(|p| ds[p.piece].boundary[p.component].pi1_injective == Some(true));
        let mut boundary = Vec::new();
        for (k, d) in ds.iter().enumerate() {
            for (j, r) in d.boundary.iter().enumerate() {
                if used.contains(&Port { piece: k, component: j }) {
                    continue;
                }
                boundary.push(BoundaryRef {
                    pi1_injective: if amenable {
                        Some(true)
                    } else if seams_injective {
                        r.pi1_injective
                    } else {
                        None
                    },
                    pi1_surjective: None,
                    ..r.clone()
                });
            }
        }
        // Union-find over pieces.
        let mut parent: Vec<usize> = (0..ds.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (a, b) in pairs {
            let (x, y) = (find(&mut parent, a.piece), find(&mut parent, b.piece));
            parent[x] = y;
        }
        let roots = (0..ds.len()).filter(|&k| find(&mut parent, k) == k).count();
        let connected = if roots > 1 {
            Some(false)
        } else {
            and(ds.iter().map(|d| d.connected))
        };
        let seam_aspherical = pairs.iter().all(|(a, _)| {
            let r = &ds[a.piece].boundary[a.component];
            r.aspherical == Some(true)
                || self
                    .handle(&r.manifold)
                    .is_ok_and(|h| self.description(h).aspherical == Some(true))
        });
        let aspherical =
            (and(ds.iter().map(|d| d.aspherical)) == Some(true) && seams_injective && seam_aspherical).then_some(true);
        Ok(Description {
            closed: Some(boundary.is_empty()),
            oriented: and(ds.iter().map(|d| d.oriented)),
            connected,
            aspherical,
            signature: if dim % 4 == 0 {
                ds.iter().map(|d| d.signature).sum()
            } else {
                None
            },
            boundary,
            origin: Some(Origin::Glue {
                pieces: pieces.to_vec(),
                pairs: pairs.to_vec(),
            }),
            ..Description::new(name, dim)
        })
    }

    fn same_up_to_orientation(&self, a: Handle, b: Handle) -> bool {
        use super::Link;
        let rev = |x: Handle, y: Handle| matches!(self.node(x.0).link, Some(Link::Reversed(m)) if m == y.0);
        a == b || rev(a, b) || rev(b, a)
    }
}
