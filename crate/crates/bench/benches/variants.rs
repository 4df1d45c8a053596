use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tnf_bench::{basis_selections, system, variants, CELLS};
use tnf_core::solver::solve;

fn construction_variants(c: &mut Criterion) {
    let mut group = c.benchmark_group("variants");
    group.sample_size(10);
    for (n, d) in CELLS {
        let s = system(n, d);
        for (name, config) in variants() {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_d{d}")), &s, |b, s| {
                b.iter(|| solve(s, &config).expect("benchmark system solves"))
            });
        }
    }
    group.finish();
}

fn basis_selection(c: &mut Criterion) {
    let mut group = c.benchmark_group("basis_select");
    group.sample_size(10);
    for (n, d) in [(2, 10), (3, 3)] {
        let s = system(n, d);
        for (name, config) in basis_selections() {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_d{d}")), &s, |b, s| {
                b.iter(|| solve(s, &config).expect("benchmark system solves"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, construction_variants, basis_selection);
criterion_main!(benches);
