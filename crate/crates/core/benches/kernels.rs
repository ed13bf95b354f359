//! Parallel against sequential on the heavy kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gpalg::algebra::{ideal_closure, radical};
use gpalg::gpa::{build_truncated_gpa, Quiver, RelationSet, TruncatedGpa, VertexAlgebraFamily};
use gpalg::models::diagonal_algebra;
use gpalg::presentation::{extract_presentation, PresentationOptions};
use gpalg::{par, Rationals};

fn workload() -> TruncatedGpa<Rationals> {
    let f = Rationals;
    let quiver = Quiver::from_names(&["1", "2", "3"], &[("x", "1", "2"), ("y", "2", "3"), ("z", "1", "3"), ("w", "2", "2")]).unwrap();
    let algs = vec![diagonal_algebra(&f, 2), diagonal_algebra(&f, 1), diagonal_algebra(&f, 2)];
    let family = VertexAlgebraFamily::new(&quiver, algs).unwrap();
    build_truncated_gpa(&quiver, &family, &RelationSet::empty(3)).unwrap()
}

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn kernels(c: &mut Criterion) {
    let gpa = workload();
    let alg = &gpa.algebra;
    let arrows: Vec<Vec<_>> = gpa.paths.iter().enumerate().filter(|(_, p)| p.len() == 1).map(|(k, _)| alg.basis_element(k)).collect();

    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_enabled(on);
        group.bench_with_input(BenchmarkId::new("associativity", name), alg, |b, a| b.iter(|| a.check_associativity().unwrap()));
        group.bench_with_input(BenchmarkId::new("ideal_closure", name), &arrows, |b, g| b.iter(|| ideal_closure(alg, g)));
        group.bench_with_input(BenchmarkId::new("radical", name), alg, |b, a| b.iter(|| radical(a).unwrap()));
        group.bench_with_input(BenchmarkId::new("presentation", name), alg, |b, a| {
            b.iter(|| extract_presentation(a, 0, &PresentationOptions::default()).unwrap())
        });
    }
    par::set_enabled(true);
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
