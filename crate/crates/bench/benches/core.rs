use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use swarmprint::combinatorics::{log_hyperfactorial, log_superfactorial};
use swarmprint::emission::estimate_emissions;
use swarmprint::engine::optimize;
use swarmprint::harness::{catalog_table, TestFunction, TestFunctionKind};
use swarmprint::{AlgorithmKind, EmissionInputs, StoppingCriteria, SwarmConfig};

fn combinatorics(c: &mut Criterion) {
    c.bench_function("log_superfactorial(1e6)", |b| b.iter(|| log_superfactorial(black_box(1_000_000))));
    c.bench_function("log_hyperfactorial(1e6)", |b| b.iter(|| log_hyperfactorial(black_box(1_000_000))));
}

fn emission(c: &mut Criterion) {
    let small = EmissionInputs::unit(30, 100);
    let large = EmissionInputs::unit(10_000, 100_000);
    c.bench_function("estimate_emissions exact", |b| b.iter(|| estimate_emissions(black_box(&small))));
    c.bench_function("estimate_emissions log only", |b| b.iter(|| estimate_emissions(black_box(&large))));
    let catalog = swarmprint::catalog::load_reference_table().unwrap();
    c.bench_function("catalog_table", |b| b.iter(|| catalog_table(black_box(&catalog))));
}

fn engine(c: &mut Criterion) {
    let f = TestFunction::new(TestFunctionKind::Rastrigin, 10).unwrap();
    let space = f.search_space();
    let mut group = c.benchmark_group("optimize rastrigin10 30x100");
    group.sample_size(20);
    for kind in AlgorithmKind::ALL {
        let cfg = SwarmConfig::new(kind, 30, StoppingCriteria::generations(100)).with_seed(1);
        group.bench_function(kind.catalog_name(), |b| b.iter(|| optimize(&cfg, &space, |x: &[f64]| f.evaluate(x))));
    }
    group.finish();
}

criterion_group!(benches, combinatorics, emission, engine);
criterion_main!(benches);
