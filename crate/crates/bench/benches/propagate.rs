use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use svlab_cli::{run_script, Options};
use svlab_core::inference::{BoundaryRef, Construction, Description, Registry};

fn registry() -> Registry {
    let mut reg = Registry::new();
    reg.add_manifold(Description {
        amenable: Some(true),
        aspherical: Some(true),
        chi: Some(0),
        ..Description::closed_manifold("S1", 1)
    })
    .unwrap();
    reg.add_manifold(Description {
        hyperbolic: Some(true),
        aspherical: Some(true),
        chi: Some(-2),
        ..Description::closed_manifold("F", 2)
    })
    .unwrap();
    let inj = BoundaryRef {
        pi1_injective: Some(true),
        ..BoundaryRef::new("S1")
    };
    reg.add_manifold(Description {
        aspherical: Some(true),
        chi: Some(-1),
        ..Description::bounded_manifold("Tx", 2, vec![inj])
    })
    .unwrap();
    let mut last = "F".to_string();
    for k in 0..8 {
        let name = format!("F{k}");
        reg.add_construction(&name, &Construction::ConnectedSum(last, "F".into()))
            .unwrap();
        reg.add_construction(
            &format!("{name}xS1"),
            &Construction::Product(vec![name.clone(), "S1".into()]),
        )
        .unwrap();
        last = name;
    }
    reg.add_construction("D", &Construction::Double("Tx".into())).unwrap();
    reg.add_construction("P", &Construction::Product(vec!["Tx".into(), "Tx".into(), "Tx".into()]))
        .unwrap();
    reg
}

fn bench(c: &mut Criterion) {
    c.bench_function("propagate/registry", |b| {
        b.iter_batched(
            registry,
            |mut reg| reg.propagate().unwrap().clone(),
            criterion::BatchSize::SmallInput,
        )
    });
    let script = include_str!("../../../scripts/triple_product.svl");
    c.bench_function("run_script/triple_product", |b| {
        b.iter(|| run_script(black_box(script), &Options::default()).unwrap())
    });
    let script = include_str!("../../../scripts/torus_covers.svl");
    c.bench_function("run_script/torus_covers", |b| {
        b.iter(|| run_script(black_box(script), &Options::default()).unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
