use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use svlab_core::constructions::connected_sum;
use svlab_core::datasets::builtin;
use svlab_core::subdivision::barycentric_subdivide;
use svlab_core::{homology, manifold_check};

fn bench(c: &mut Criterion) {
    let torus = builtin("Torus7").unwrap();
    let sub = barycentric_subdivide(&torus).complex;
    let s3 = builtin("Sphere[3]").unwrap();
    let m = manifold_check(&torus).unwrap();

    c.bench_function("homology/Torus7", |b| {
        b.iter(|| homology(black_box(&torus), None).unwrap())
    });
    c.bench_function("homology/sd(Torus7)", |b| {
        b.iter(|| homology(black_box(&sub), None).unwrap())
    });
    c.bench_function("homology/Sphere[3]", |b| {
        b.iter(|| homology(black_box(&s3), None).unwrap())
    });
    c.bench_function("manifold_check/sd(Torus7)", |b| {
        b.iter(|| manifold_check(black_box(&sub)).unwrap())
    });
    c.bench_function("connected_sum/Torus7", |b| {
        b.iter(|| connected_sum(black_box(&m), &m, None, None, "T#T").unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
