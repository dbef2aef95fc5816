use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use svlab_core::cobordism::{
    additive, chi_functor, compose, connsum_monoid_eval, extension_obstruction, reinhart_class, surface_generators,
    sv_functor, tensor, Category, CobObject, Cobordism, CobordismError, ReinhartClass, SurfaceGenerators,
};
use svlab_core::constructions::connected_sum;
use svlab_core::datasets;
use svlab_core::inference::{Construction, Description, Interval, Registry};
use svlab_core::{homology, manifold_check, Complex, ManifoldComplex};

fn setup() -> (Registry, SurfaceGenerators) {
    let mut reg = Registry::new();
    let g = surface_generators(&mut reg).unwrap();
    (reg, g)
}

fn chi(reg: &Registry, name: &str) -> i64 {
    reg.state(reg.handle(name).unwrap()).unwrap().chi.unwrap()
}

/// V − E + F from the facet list alone.
fn count_chi(facets: &[Vec<usize>]) -> i64 {
    let mut v = BTreeSet::new();
    let mut e = BTreeSet::new();
    for f in facets {
        for i in 0..3 {
            v.insert(f[i]);
            let (a, b) = (f[i], f[(i + 1) % 3]);
            e.insert((a.min(b), a.max(b)));
        }
    }
    v.len() as i64 - e.len() as i64 + facets.len() as i64
}

/// An icosahedron with three vertex-disjoint triangles removed.
fn pants_facets() -> Vec<Vec<usize>> {
    let u = |i: usize| 1 + i % 5;
    let l = |i: usize| 6 + i % 5;
    let mut fs = Vec::new();
    for i in 0..5 {
        fs.push(vec![0, u(i), u(i + 1)]);
        fs.push(vec![u(i), l(i), u(i + 1)]);
        fs.push(vec![u(i + 1), l(i), l(i + 1)]);
        fs.push(vec![11, l(i + 1), l(i)]);
    }
    let removed = [vec![0, u(0), u(1)], vec![11, l(1), l(0)], vec![u(3), l(2), l(3)]];
    fs.retain(|f| !removed.contains(f));
    fs
}

#[test]
fn generator_values() {
    let (mut reg, g) = setup();
    reg.propagate().unwrap();
    let expected = [
        ("cap", 1),
        ("cup", 1),
        ("pants", -1),
        ("copants", -1),
        ("cylinder", 0),
        ("cylinder⊔cylinder", 0),
        ("twist", 0),
        ("handle", -2),
    ];
    for ((name, f), (n, x)) in g.all().into_iter().zip(expected) {
        assert_eq!(name, n);
        assert_eq!(chi_functor(&reg, f).unwrap(), x, "{name}");
    }
    assert_eq!(g.pants.source, CobObject::new(["S1", "S1"]));
    assert_eq!(g.cap.target, CobObject::empty());
    assert_eq!(g.twist.outgoing, vec![3, 1]);
}

#[test]
fn pants_recount() {
    let fs = pants_facets();
    assert_eq!(fs.len(), 17);
    let k = Complex::new("pants", 2, 12, fs.clone()).unwrap();
    let m = manifold_check(&k).unwrap();
    assert_eq!(m.boundary_components().len(), 3);
    assert!(m.is_connected());
    assert_eq!(count_chi(&fs), -1);
    let (mut reg, _) = setup();
    reg.propagate().unwrap();
    assert_eq!(chi(&reg, "Pants"), count_chi(&fs));
    // Annulus and punctured torus datasets against the cylinder and handle.
    let annulus = datasets::builtin("Annulus").unwrap();
    assert_eq!(count_chi(annulus.facets()), chi(&reg, "Cylinder"));
    let pt = datasets::builtin("PuncturedTorus").unwrap();
    assert_eq!(count_chi(pt.facets()) - 1, chi(&reg, "Handle"));
}

/// All ordered pairs `(f, g)`; composable ones give `g ∘ f`.
fn all_pairs(
    reg: &mut Registry,
    g: &SurfaceGenerators,
    category: Category,
) -> Vec<(String, String, Result<Cobordism, CobordismError>)> {
    let gens: Vec<(&str, Cobordism)> = g.all().into_iter().map(|(n, c)| (n, c.clone())).collect();
    let mut out = Vec::new();
    for (a, f) in &gens {
        for (b, h) in &gens {
            let name = format!("{b}∘{a} ({category:?})");
            out.push((a.to_string(), b.to_string(), compose(reg, f, h, &name, category)));
        }
    }
    out
}

#[test]
fn chi_functor_on_all_pairs() {
    let (mut reg, g) = setup();
    let pairs = all_pairs(&mut reg, &g, Category::Oriented);
    reg.propagate().unwrap();
    let by_name: std::collections::BTreeMap<&str, &Cobordism> = g.all().into_iter().collect();
    assert_eq!(pairs.len(), 64);
    let mut composable = 0;
    for (a, b, r) in &pairs {
        let (f, h) = (by_name[a.as_str()], by_name[b.as_str()]);
        match r {
            Ok(c) => {
                composable += 1;
                assert_eq!(f.target, h.source);
                assert_eq!(c.source, f.source);
                assert_eq!(c.target, h.target);
                let lhs = chi_functor(&reg, c).unwrap();
                let rhs = chi_functor(&reg, f).unwrap() + chi_functor(&reg, h).unwrap();
                assert_eq!(lhs, rhs, "{b}∘{a}");
            }
            Err(e) => {
                assert_ne!(f.target, h.source);
                assert!(matches!(e, CobordismError::ObjectMismatch { .. }), "{e}");
            }
        }
    }
    assert_eq!(composable, 26);
}

#[test]
fn sv_functor_on_amenable_pairs() {
    let (mut reg, g) = setup();
    let pairs = all_pairs(&mut reg, &g, Category::Amenable);
    reg.propagate().unwrap();
    let by_name: std::collections::BTreeMap<&str, &Cobordism> = g.all().into_iter().collect();
    let mut checked = 0;
    for (a, b, r) in &pairs {
        let (f, h) = (by_name[a.as_str()], by_name[b.as_str()]);
        if f.target != h.source {
            continue;
        }
        if !(f.is_member(&reg) && h.is_member(&reg)) {
            assert!(matches!(r, Err(CobordismError::NotMember(..))), "{b}∘{a}");
            continue;
        }
        let c = r.as_ref().unwrap();
        let composite = sv_functor(&reg, c).unwrap();
        let sum = sv_functor(&reg, f).unwrap().add(&sv_functor(&reg, h).unwrap());
        assert!(additive(&composite, &sum), "{b}∘{a}: {composite} vs {sum}");
        checked += 1;
    }
    assert_eq!(checked, 18);
    // Two cylinders.
    let cc = compose(&mut reg, &g.cylinder, &g.cylinder, "C∘C", Category::Amenable).unwrap();
    reg.propagate().unwrap();
    assert_eq!(sv_functor(&reg, &cc).unwrap(), Interval::zero());
    assert_eq!(chi(&reg, "C∘C"), 0);
}

#[test]
fn non_members_are_refused() {
    let (mut reg, g) = setup();
    reg.propagate().unwrap();
    for f in [&g.cap, &g.cup] {
        assert!(matches!(sv_functor(&reg, f), Err(CobordismError::NotMember(..))));
    }
    assert!(matches!(
        compose(&mut reg, &g.cup, &g.cap, "S2", Category::Amenable),
        Err(CobordismError::NotMember(..))
    ));
    // Non-amenable objects.
    reg.add_manifold(Description {
        chi: Some(-2),
        ..Description::closed_manifold("Σ2", 2)
    })
    .unwrap();
    reg.add_manifold(Description::bounded_manifold(
        "Σ2×I",
        3,
        vec![
            svlab_core::inference::BoundaryRef {
                pi1_injective: Some(true),
                ..svlab_core::inference::BoundaryRef::new("Σ2")
            };
            2
        ],
    ))
    .unwrap();
    reg.propagate().unwrap();
    let c = Cobordism::new(&reg, "Σ2×I", vec![0], vec![1]).unwrap();
    assert!(matches!(sv_functor(&reg, &c), Err(CobordismError::NotMember(..))));
}

#[test]
fn composition_examples() {
    let (mut reg, g) = setup();
    let sphere = compose(&mut reg, &g.cup, &g.cap, "S2", Category::Oriented).unwrap();
    let disks = compose(&mut reg, &g.cap, &g.cup, "D2⊔D2", Category::Oriented).unwrap();
    let tube = compose(&mut reg, &g.pants, &g.cap, "pants∘cap", Category::Oriented).unwrap();
    let bad = compose(&mut reg, &g.pants, &g.pants, "x", Category::Oriented);
    assert!(matches!(bad, Err(CobordismError::ObjectMismatch { .. })));
    assert!(!reg.contains("x"));
    reg.propagate().unwrap();
    assert_eq!(chi(&reg, "S2"), 2);
    assert_eq!(chi_functor(&reg, &sphere).unwrap(), 2);
    assert_eq!(reg.description(reg.handle("S2").unwrap()).closed, Some(true));
    assert_eq!(chi_functor(&reg, &disks).unwrap(), 2);
    assert_eq!(disks.source, CobObject::new(["S1"]));
    assert_eq!(chi(&reg, "pants∘cap"), 0);
    assert_eq!(tube.source, CobObject::new(["S1", "S1"]));
    assert!(tube.target.is_empty());
    assert_eq!(
        reinhart_class(&reg, "S2").unwrap(),
        ReinhartClass::Surface { half_chi: 1 }
    );
}

fn random_chain(rng: &mut ChaCha8Rng, gens: &[(&str, Cobordism)], len: usize) -> Vec<Cobordism> {
    loop {
        let mut out: Vec<Cobordism> = vec![gens.choose(rng).unwrap().1.clone()];
        while out.len() < len {
            let last = out.last().unwrap().target.clone();
            let next: Vec<&Cobordism> = gens.iter().map(|(_, c)| c).filter(|c| c.source == last).collect();
            match next.choose(rng) {
                Some(c) => out.push((*c).clone()),
                None => break,
            }
        }
        if out.len() == len {
            return out;
        }
    }
}

#[test]
fn category_laws_on_random_triples() {
    let (mut reg, g) = setup();
    let gens: Vec<(&str, Cobordism)> = g.all().into_iter().map(|(n, c)| (n, c.clone())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = Vec::new();
    for t in 0..20 {
        let fs = random_chain(&mut rng, &gens, 3);
        let o = Category::Oriented;
        let ab = compose(&mut reg, &fs[0], &fs[1], &format!("ab{t}"), o).unwrap();
        let left = compose(&mut reg, &ab, &fs[2], &format!("(ab)c{t}"), o).unwrap();
        let bc = compose(&mut reg, &fs[1], &fs[2], &format!("bc{t}"), o).unwrap();
        let right = compose(&mut reg, &fs[0], &bc, &format!("a(bc){t}"), o).unwrap();
        let id_in = Cobordism::new(&reg, "Cylinder", vec![0], vec![1]).unwrap();
        let unit = if fs[0].source == id_in.target {
            Some(compose(&mut reg, &id_in, &fs[0], &format!("1a{t}"), o).unwrap())
        } else {
            None
        };
        cases.push((fs, left, right, unit));
    }
    reg.propagate().unwrap();
    for (fs, left, right, unit) in &cases {
        assert_eq!(left.source, right.source);
        assert_eq!(left.target, right.target);
        assert_eq!(chi(&reg, &left.body), chi(&reg, &right.body));
        let total: i64 = fs.iter().map(|f| chi_functor(&reg, f).unwrap()).sum();
        assert_eq!(chi_functor(&reg, left).unwrap(), total);
        assert_eq!(chi_functor(&reg, right).unwrap(), total);
        if let Some(u) = unit {
            assert_eq!((&u.source, &u.target), (&fs[0].source, &fs[0].target));
            assert_eq!(chi_functor(&reg, u).unwrap(), chi_functor(&reg, &fs[0]).unwrap());
        }
    }
}

#[test]
fn tensor_is_additive() {
    let (mut reg, g) = setup();
    let gens: Vec<(&str, Cobordism)> = g.all().into_iter().map(|(n, c)| (n, c.clone())).collect();
    let mut made = Vec::new();
    for (a, f) in &gens {
        for (b, h) in &gens {
            let t = tensor(&mut reg, f, h, &format!("{a}⊗{b}")).unwrap();
            made.push((f.clone(), h.clone(), t));
        }
    }
    reg.propagate().unwrap();
    for (f, h, t) in &made {
        assert_eq!(t.source.labels.len(), f.source.labels.len() + h.source.labels.len());
        assert_eq!(
            chi_functor(&reg, t).unwrap(),
            chi_functor(&reg, f).unwrap() + chi_functor(&reg, h).unwrap()
        );
        if f.is_member(&reg) && h.is_member(&reg) {
            let sum = sv_functor(&reg, f).unwrap().add(&sv_functor(&reg, h).unwrap());
            assert!(additive(&sv_functor(&reg, t).unwrap(), &sum));
        }
    }
}

fn genus(g: usize) -> ManifoldComplex {
    let torus = manifold_check(&datasets::builtin("Torus7").unwrap()).unwrap();
    if g == 0 {
        return manifold_check(&datasets::builtin("Sphere[2]").unwrap()).unwrap();
    }
    let mut m = torus.clone();
    for k in 1..g {
        m = connected_sum(&m, &torus, None, None, &format!("Σ{}", k + 1))
            .unwrap()
            .manifold;
    }
    m
}

#[test]
fn reinhart_classes_of_surfaces() {
    let mut reg = Registry::new();
    for g in 0..=5 {
        let m = genus(g);
        let betti = homology(m.complex(), None).unwrap().betti;
        let oracle = betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum::<i64>();
        assert_eq!(oracle, 2 - 2 * g as i64);
        let name = format!("Σ{g}");
        reg.add_triangulated(Description::closed_manifold(&name, 2), &m)
            .unwrap();
        reg.propagate().unwrap();
        let c = reinhart_class(&reg, &name).unwrap();
        assert_eq!(c, ReinhartClass::Surface { half_chi: 1 - g as i64 });
        assert_eq!(c.chi(), Some(oracle));
    }
}

#[test]
fn reinhart_classes_in_low_dimensions() {
    let mut reg = Registry::new();
    reg.add_manifold(Description {
        chi: Some(3),
        signature: Some(1),
        ..Description::closed_manifold("CP2", 4)
    })
    .unwrap();
    reg.add_construction("−CP2", &Construction::Reversed("CP2".into()))
        .unwrap();
    let disjoint = |pieces: &[&str]| Construction::Glue {
        pieces: pieces.iter().map(|s| s.to_string()).collect(),
        pairs: vec![],
        amenable: false,
    };
    reg.add_construction("CP2⊔−CP2", &disjoint(&["CP2", "−CP2"])).unwrap();
    reg.add_manifold(Description {
        chi: Some(2),
        ..Description::closed_manifold("S4", 4)
    })
    .unwrap();
    reg.add_manifold(Description {
        chi: Some(3),
        signature: Some(0),
        ..Description::closed_manifold("odd", 4)
    })
    .ok();
    reg.add_manifold(Description {
        chi: Some(0),
        ..Description::closed_manifold("S1", 1)
    })
    .unwrap();
    reg.add_construction("2S1", &disjoint(&["S1", "S1"])).unwrap();
    reg.add_construction("3S1", &disjoint(&["2S1", "S1"])).unwrap();
    reg.add_manifold(Description {
        chi: Some(1),
        signature: Some(-1),
        ..Description::closed_manifold("pt−", 0)
    })
    .unwrap();
    reg.add_manifold(Description {
        chi: Some(0),
        ..Description::closed_manifold("T3", 3)
    })
    .unwrap();
    reg.add_manifold(Description::closed_manifold("M5", 5)).unwrap();
    reg.propagate().unwrap();

    let cp2 = reinhart_class(&reg, "CP2").unwrap();
    assert_eq!(cp2, ReinhartClass::Four { chi: 3, signature: 1 });
    let both = reinhart_class(&reg, "CP2⊔−CP2").unwrap();
    assert_eq!(both, ReinhartClass::Four { chi: 6, signature: 0 });
    assert_eq!(Some(both), cp2.add(&cp2.reversed()));
    assert_eq!(both.sphere_multiple(), Some(3));
    assert_eq!(both.chi(), Some(6));
    assert!(matches!(
        reinhart_class(&reg, "S4"),
        Err(CobordismError::MissingSignature(_))
    ));
    assert!(!reg.contains("odd"), "parity is checked on registration");
    assert_eq!(
        reinhart_class(&reg, "S1").unwrap(),
        ReinhartClass::Circles { parity: 1 }
    );
    assert_eq!(
        reinhart_class(&reg, "2S1").unwrap(),
        ReinhartClass::Circles { parity: 0 }
    );
    assert_eq!(
        reinhart_class(&reg, "3S1").unwrap(),
        ReinhartClass::Circles { parity: 1 }
    );
    let pt = reinhart_class(&reg, "pt−").unwrap();
    assert_eq!(pt, ReinhartClass::Points { count: 1, signed: -1 });
    assert_eq!(pt.add(&pt.reversed()).and_then(|c| c.sphere_multiple()), Some(1));
    assert_eq!(reinhart_class(&reg, "T3").unwrap(), ReinhartClass::Trivial);
    assert!(matches!(
        reinhart_class(&reg, "M5"),
        Err(CobordismError::UnsupportedDimension(5))
    ));
}

#[test]
fn reinhart_class_needs_chi() {
    // A label whose χ comes only from propagation, so registration cannot see it.
    let mut reg = Registry::new();
    reg.add_manifold(Description {
        chi: Some(2),
        signature: Some(1),
        ..Description::closed_manifold("A", 4)
    })
    .ok();
    assert!(!reg.contains("A"));
    reg.add_manifold(Description {
        signature: Some(1),
        ..Description::closed_manifold("B", 4)
    })
    .unwrap();
    reg.add_manifold(Description {
        chi: Some(2),
        ..Description::closed_manifold("C", 4)
    })
    .unwrap();
    reg.add_construction("−C", &Construction::Reversed("C".into())).unwrap();
    reg.add_manifold(Description {
        chi: Some(4),
        signature: Some(1),
        origin: Some(svlab_core::inference::Origin::Reversed { of: "B".into() }),
        ..Description::closed_manifold("D", 4)
    })
    .ok();
    reg.propagate().unwrap();
    let err = reinhart_class(&reg, "B").unwrap_err();
    assert!(matches!(err, CobordismError::UnknownChi(_)), "{err}");
}

#[test]
fn extension_obstruction_witnesses() {
    let mut reg = Registry::new();
    reg.add_manifold(Description {
        chi: Some(-2),
        hyperbolic: Some(true),
        ..Description::closed_manifold("Σ2", 2)
    })
    .unwrap();
    reg.add_manifold(Description {
        chi: Some(0),
        amenable: Some(true),
        ..Description::closed_manifold("T2", 2)
    })
    .unwrap();
    reg.add_manifold(Description {
        chi: Some(2),
        hyperbolic: Some(true),
        ..Description::closed_manifold("H4", 4)
    })
    .unwrap();
    reg.add_manifold(Description {
        hyperbolic: Some(true),
        ..Description::closed_manifold("H7", 7)
    })
    .unwrap();
    reg.propagate().unwrap();

    let w = extension_obstruction(&reg, "Σ2").unwrap();
    assert!(w.sv.is_positive());
    assert!(w.monoidal.is_positive());
    assert_eq!(w.class, Some(ReinhartClass::Surface { half_chi: -2 }));
    assert_eq!(w.sphere_multiple, Some(-2));
    assert!(w.steps.last().unwrap().contains("contradiction"));
    assert!(w.render().contains("2·‖Σ2‖"));

    assert!(matches!(
        extension_obstruction(&reg, "T2"),
        Err(CobordismError::NotPositive(..))
    ));

    let w4 = extension_obstruction(&reg, "H4").unwrap();
    assert_eq!(w4.class, Some(ReinhartClass::Four { chi: 4, signature: 0 }));
    assert_eq!(w4.sphere_multiple, Some(2));

    let w7 = extension_obstruction(&reg, "H7").unwrap();
    assert_eq!(w7.class, None);
    assert!(w7.steps.iter().any(|s| s.contains("Ω_7^SO")));
    let json = serde_json::to_string(&w).unwrap();
    assert!(json.contains("\"steps\""));
}

#[test]
fn connected_sum_monoid() {
    let mut reg = Registry::new();
    for n in ["T3a", "T3b"] {
        reg.add_manifold(Description {
            amenable: Some(true),
            ..Description::closed_manifold(n, 3)
        })
        .unwrap();
    }
    reg.add_manifold(Description {
        hyperbolic: Some(true),
        ..Description::closed_manifold("H3", 3)
    })
    .unwrap();
    reg.add_manifold(Description::closed_manifold("F2", 2)).unwrap();
    reg.propagate().unwrap();
    assert_eq!(connsum_monoid_eval(&reg, &["T3a", "T3b"], 3).unwrap(), Interval::zero());
    assert_eq!(connsum_monoid_eval(&reg, &[], 3).unwrap(), Interval::zero());
    assert!(connsum_monoid_eval(&reg, &["T3a", "H3"], 3).unwrap().is_positive());
    assert!(matches!(
        connsum_monoid_eval(&reg, &["F2"], 2),
        Err(CobordismError::LowDimension(2))
    ));
    assert!(connsum_monoid_eval(&reg, &["F2"], 3).is_err());
}

#[test]
fn malformed_cobordisms() {
    let (reg, _) = setup();
    assert!(matches!(
        Cobordism::new(&reg, "Cylinder", vec![0], vec![]),
        Err(CobordismError::Malformed(..))
    ));
    assert!(matches!(
        Cobordism::new(&reg, "Cylinder", vec![0], vec![0]),
        Err(CobordismError::Malformed(..))
    ));
    assert!(matches!(
        Cobordism::new(&reg, "Cylinder", vec![0], vec![2]),
        Err(CobordismError::Malformed(..))
    ));
    assert!(Cobordism::new(&reg, "Nope", vec![], vec![]).is_err());
}
