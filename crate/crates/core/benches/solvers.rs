use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hammctr::gen::random_instance;
use hammctr::inclexcl::inclexcl_closest;
use hammctr::matmul::{distance_matrix, MatmulOptions, Tau};
use hammctr::naive::{brute_continuous_closest, naive_closest};
use hammctr::{Budget, Exec};

const EXECS: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn naive(c: &mut Criterion) {
    let x = random_instance(2000, 64, 4, 1).unwrap();
    let mut g = c.benchmark_group("naive_closest");
    for (name, exec) in EXECS {
        g.bench_function(name, |b| b.iter(|| naive_closest(&x, exec)));
    }
    g.finish();
}

fn inclexcl(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("inclexcl_closest");
    g.sample_size(10);
    for d in [8usize, 12] {
        let x = random_instance(20_000, d, 4, 2).unwrap();
        for (name, exec) in EXECS {
            g.bench_with_input(BenchmarkId::new(name, d), &x, |b, x| {
                b.iter(|| inclexcl_closest(x, &budget, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn matmul(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("distance_matrix");
    g.sample_size(10);
    let binary = random_instance(512, 512, 2, 3).unwrap();
    let wide = random_instance(512, 512, 16, 4).unwrap();
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::new(name, "popcount"), |b| {
            b.iter(|| distance_matrix(&binary, MatmulOptions::default(), &budget, exec).unwrap())
        });
        g.bench_function(BenchmarkId::new(name, "split-auto"), |b| {
            b.iter(|| {
                distance_matrix(&wide, MatmulOptions::split(Tau::Auto), &budget, exec).unwrap()
            })
        });
    }
    g.finish();
}

fn brute(c: &mut Criterion) {
    let budget = Budget::default();
    let x = random_instance(16, 16, 2, 5).unwrap();
    let mut g = c.benchmark_group("brute_continuous_closest");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(name, |b| {
            b.iter(|| brute_continuous_closest(&x, &budget, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, naive, inclexcl, matmul, brute);
criterion_main!(benches);
