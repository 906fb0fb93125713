use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stabforge_core::slag::trace_slag;
use stabforge_core::{Complex64, SLagProblem};

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("trace_slag");
    group.sample_size(20);
    for (name, phi, seed) in [
        ("open", 0.25, Complex64::new(0.5, 0.8)),
        ("closed", 0.5, Complex64::new(1.0, 0.0)),
    ] {
        let p = SLagProblem::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), phi, seed);
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| {
            b.iter(|| trace_slag(p).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
