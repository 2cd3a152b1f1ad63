use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use torus_ham_core::{construct_hamiltonian, generate, verify_certificate, MapType};

const INSTANCES: [(MapType, usize, usize, usize); 7] = [
    (MapType::Snub33344, 6, 4, 2),
    (MapType::Snub33434, 8, 4, 2),
    (MapType::Kagome, 8, 2, 6),
    (MapType::Snub33336, 9, 6, 2),
    (MapType::Octagonal, 8, 3, 2),
    (MapType::Great4612, 18, 2, 9),
    (MapType::Rhombi3464, 9, 2, 5),
];

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    for (t, r, s, k) in INSTANCES {
        group.bench_function(BenchmarkId::new(t.name(), format!("T({r},{s},{k})")), |b| {
            b.iter(|| generate(t, black_box(r), black_box(s), black_box(k)).unwrap())
        });
    }
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_and_verify");
    for (t, r, s, k) in INSTANCES {
        let (map, lab) = generate(t, r, s, k).unwrap();
        group.bench_function(BenchmarkId::new(t.name(), format!("T({r},{s},{k})")), |b| {
            b.iter(|| {
                let cert = construct_hamiltonian(black_box(&map), &lab).unwrap();
                verify_certificate(&map, &cert).unwrap();
                cert
            })
        });
    }
    group.finish();
}

criterion_group!(benches, generation, construction);
criterion_main!(benches);
