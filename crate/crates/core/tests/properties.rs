use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svlab_core::certificates::{certify_from_triangulation, verify, Ledger};
use svlab_core::datasets::{builtin, SHIPPED};
use svlab_core::inference::{BoundaryRef, Construction, Description, Registry};
use svlab_core::rational::{frac, q};
use svlab_core::subdivision::{barycentric_subdivide, stellar_subdivide};
use svlab_core::{homology, manifold_check, Chain, Complex, Simplex};

fn shipped() -> Vec<Complex> {
    SHIPPED.iter().map(|n| builtin(n).unwrap()).collect()
}

/// A random stellar move on a simplex of dimension at least one.
fn stellar_step(k: &Complex, rng: &mut ChaCha8Rng) -> Complex {
    let d = rng.gen_range(1..=k.dim());
    let s = k.simplices(d).choose(rng).unwrap().clone();
    stellar_subdivide(k, &s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_of_boundary_vanishes(
        degree in 1usize..6,
        terms in prop::collection::vec((Just((0usize..9).collect::<Vec<_>>()).prop_shuffle(), -20i64..20, 1i64..6), 1..12),
    ) {
        let mut c = Chain::zero(degree);
        for (vs, n, d) in terms {
            c.add_oriented(&vs[..=degree], frac(n, d));
        }
        prop_assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn boundary_estimate_survives_stellar_moves(seed in any::<u64>(), moves in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in shipped() {
            let Ok(m) = manifold_check(&k) else { continue };
            if m.is_closed() {
                continue;
            }
            let mut k = k;
            for _ in 0..moves {
                k = stellar_step(&k, &mut rng);
            }
            let m = manifold_check(&k).unwrap();
            let c = m.fundamental_cycle();
            let lhs = c.boundary().l1_norm();
            let rhs = q(m.dim() as i64 + 1) * c.l1_norm();
            prop_assert!(lhs <= rhs, "{}: {} > {}", k.name(), lhs, rhs);
        }
    }

    #[test]
    fn stellar_moves_keep_homology(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in shipped() {
            let s = stellar_step(&k, &mut rng);
            prop_assert_eq!(homology(&k, None).unwrap(), homology(&s, None).unwrap());
            prop_assert_eq!(k.euler_characteristic(), s.euler_characteristic());
        }
    }
}

#[test]
fn euler_characteristic_from_counts_and_betti() {
    for k in shipped() {
        let sub = barycentric_subdivide(&k).complex;
        for x in [&k, &sub] {
            let h = homology(x, None).unwrap();
            assert_eq!(x.euler_characteristic(), h.euler_characteristic(), "{}", x.name());
        }
    }
}

#[test]
fn certificates_reverify_after_serialization() {
    let mut ledger = Ledger::new();
    for k in shipped() {
        let Ok(m) = manifold_check(&k) else { continue };
        if !m.is_connected() {
            continue;
        }
        let (a, b) = certify_from_triangulation(&m).unwrap();
        ledger.append(a).unwrap();
        ledger.append(b).unwrap();
    }
    let back = Ledger::from_json(&ledger.to_json()).unwrap();
    assert_eq!(back, ledger);
    assert!(back.certificates().iter().all(|c| verify(c).is_pass()));
}

fn registry() -> Registry {
    let mut reg = Registry::new();
    let add = |reg: &mut Registry, d: Description| {
        reg.add_manifold(d).unwrap();
    };
    add(
        &mut reg,
        Description {
            amenable: Some(true),
            aspherical: Some(true),
            chi: Some(0),
            ..Description::closed_manifold("S1", 1)
        },
    );
    add(
        &mut reg,
        Description {
            aspherical: Some(true),
            hyperbolic: Some(true),
            chi: Some(-2),
            ..Description::closed_manifold("F", 2)
        },
    );
    let inj = BoundaryRef {
        pi1_injective: Some(true),
        ..BoundaryRef::new("S1")
    };
    add(
        &mut reg,
        Description {
            aspherical: Some(true),
            chi: Some(-1),
            ..Description::bounded_manifold("Tx", 2, vec![inj])
        },
    );
    reg.add_construction("D", &Construction::Double("Tx".into())).unwrap();
    reg.add_construction("FxF", &Construction::Product(vec!["F".into(), "F".into()]))
        .unwrap();
    reg.add_construction("P", &Construction::Product(vec!["Tx".into(), "Tx".into()]))
        .unwrap();
    reg.add_construction("F#F", &Construction::ConnectedSum("F".into(), "F".into()))
        .unwrap();
    reg.add_construction("FxS1", &Construction::Product(vec!["F".into(), "S1".into()]))
        .unwrap();
    reg
}

#[test]
fn propagation_is_confluent() {
    let mut reg = registry();
    let reference = reg.propagate().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut order: Vec<usize> = (0..reg.job_count()).collect();
    for _ in 0..25 {
        order.shuffle(&mut rng);
        assert_eq!(reg.propagate_with_order(&order).unwrap(), &reference);
    }
}

#[test]
fn faces_of_stellar_moves_are_present() {
    let k = builtin("Torus7").unwrap();
    let e = k.simplices(1)[0].clone();
    let s = stellar_subdivide(&k, &e).unwrap();
    assert!(!s.contains(&e));
    assert_eq!(s.vertex_count(), k.vertex_count() + 1);
    assert_eq!(s.facet_count(), k.facet_count() + 2);
    assert!(s.contains(&Simplex::from_sorted(vec![e.vertices()[0], k.vertex_count()])));
}
