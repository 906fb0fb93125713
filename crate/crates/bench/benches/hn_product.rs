use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabforge_core::product::{hn_product, random_filtration};
use stabforge_core::{Complex64, FormalObject, ProductStab, StabP1};

fn tuple(n: usize) -> ProductStab {
    let factors = (0..n)
        .map(|l| StabP1::algebraic(l as i64 - 1, 0.1 * l as f64, 1.0 + 0.4 * l as f64, 1.0, 2.0).unwrap())
        .collect();
    ProductStab::new(factors, Complex64::new(0.0, 0.0)).unwrap()
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("hn_product");
    for n in [2, 3, 4] {
        let ps = tuple(n);
        let heart = ps.stable_generators(-4..=4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let objs: Vec<FormalObject> = (0..64)
            .map(|_| FormalObject::new(n, random_filtration(&heart, 8, &mut rng)))
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &objs, |b, objs| {
            b.iter(|| {
                for o in objs {
                    let _ = hn_product(&ps, o);
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
