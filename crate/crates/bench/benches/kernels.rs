use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lnpc_bench::{problem, surrogate};
use lnpc_core::hermite::gauss_hermite_rule;
use lnpc_core::indices::build_index_set;
use lnpc_core::pce::{compute_expansion, evaluate_solution, Estimator};

fn hermite(c: &mut Criterion) {
    let mut g = c.benchmark_group("gauss_hermite_rule");
    for n in [8, 32, 64] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gauss_hermite_rule(black_box(n)))
        });
    }
    g.finish();
}

fn index_set(c: &mut Criterion) {
    let sw = surrogate();
    let mut g = c.benchmark_group("build_index_set");
    for n in [100, 1000, 10_000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_index_set(black_box(n), &sw, 64))
        });
    }
    g.finish();
}

fn solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_diffusion");
    for n in [64, 256, 1024] {
        let p = problem(n, 6);
        let y = [0.8, -0.5, 1.2, 0.3, -1.0, 0.4];
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| evaluate_solution(&p, black_box(&y)))
        });
    }
    g.finish();
}

fn expansion(c: &mut Criterion) {
    let p = problem(32, 3);
    let set = build_index_set(20, &surrogate(), 3).unwrap();
    let mut g = c.benchmark_group("compute_expansion");
    g.sample_size(10);
    g.bench_function("tensor_j3_n20", |b| {
        b.iter(|| compute_expansion(&p, &set, Estimator::tensor(2)))
    });
    g.bench_function("mc_j3_n20_4096", |b| {
        b.iter(|| compute_expansion(&p, &set, Estimator::monte_carlo(4096, 1)))
    });
    g.finish();
}

criterion_group!(benches, hermite, index_set, solve, expansion);
criterion_main!(benches);
