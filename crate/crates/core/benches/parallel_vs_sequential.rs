//! Data-parallel stages on the full rayon pool against a one-thread pool.
//! Build with `--no-default-features` to measure the sequential fallback, where
//! both variants run the same code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use alequot::bridge::{build_sphere_sample, reduced_moment_integrands, section_from_pair, SampleStrategy};
use alequot::pipeline::random_good_zeta;
use alequot::solver::solve_batch;
use alequot::{Family, FlatModule, GroupLabel, SolveOptions, Tolerances};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("pool", rayon::ThreadPoolBuilder::new().build().unwrap()),
        ("single", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn sections(c: &mut Criterion) {
    let m = FlatModule::build(GroupLabel::new(Family::D, 2).unwrap(), &Tolerances::default()).unwrap();
    let s = build_sphere_sample(20_000, SampleStrategy::Random, 1).unwrap();
    let p = m.random_point(&mut ChaCha8Rng::seed_from_u64(2), 1.0);
    let mut group = c.benchmark_group("sections_d2_20k");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| reduced_moment_integrands(&section_from_pair(&p, &s), &s).unwrap()))
        });
    }
    group.finish();
}

fn solves(c: &mut Criterion) {
    let m = FlatModule::build(GroupLabel::new(Family::E6, 0).unwrap(), &Tolerances::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let jobs: Vec<_> = (0..16).map(|i| (random_good_zeta(&m, &mut rng), i)).collect();
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("solve_batch_e6_16");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| solve_batch(&m, &jobs, &opts)))
        });
    }
    group.finish();
}

criterion_group!(benches, sections, solves);
criterion_main!(benches);
