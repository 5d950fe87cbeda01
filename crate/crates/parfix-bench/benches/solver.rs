use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use parfix::oracle::{project_intersection, OracleConfig};
use parfix::schemes::{self, RunConfig, Schedule};
use parfix::{ConvexSet, Operator, Vector};

fn vector(dim: usize, seed: u64) -> Vector {
    // cheap deterministic fill; benchmarks only need fixed inputs
    let mut state = seed;
    Vector::new(
        (0..dim)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
            })
            .collect(),
    )
    .unwrap()
}

fn halfspace_family(count: usize, dim: usize) -> Vec<Operator> {
    (0..count)
        .map(|i| {
            let normal = vector(dim, 1 + i as u64);
            let set = ConvexSet::halfspace(normal, -0.5).unwrap();
            Operator::metric_projection(set).unwrap()
        })
        .collect()
}

fn bench_projections(c: &mut Criterion) {
    let dim = 1000;
    let x = vector(dim, 7).scale(10.0).unwrap();
    let sets = [
        (
            "halfspace",
            ConvexSet::halfspace(vector(dim, 1), 0.0).unwrap(),
        ),
        (
            "ball",
            ConvexSet::ball(Vector::zeros(dim).unwrap(), 1.0).unwrap(),
        ),
        (
            "box",
            ConvexSet::boxed(
                Vector::new(vec![-1.0; dim]).unwrap(),
                Vector::new(vec![1.0; dim]).unwrap(),
            )
            .unwrap(),
        ),
    ];
    let mut group = c.benchmark_group("project_r1000");
    for (name, set) in &sets {
        group.bench_function(*name, |b| b.iter(|| set.project(black_box(&x)).unwrap()));
    }
    group.finish();
}

fn bench_selection(c: &mut Criterion) {
    let dim = 64;
    let x = vector(dim, 42).scale(5.0).unwrap();
    let mut group = c.benchmark_group("select_r64");
    for count in [2usize, 8, 32] {
        let ops = halfspace_family(count, dim);
        group.bench_with_input(BenchmarkId::from_parameter(count), &ops, |b, ops| {
            b.iter(|| parfix::select(black_box(ops), black_box(&x)).unwrap())
        });
    }
    group.finish();
}

fn bench_halpern_run(c: &mut Criterion) {
    let ops = vec![
        Operator::metric_projection(
            ConvexSet::halfspace(Vector::new(vec![1.0, 0.0]).unwrap(), 0.0).unwrap(),
        )
        .unwrap(),
        Operator::metric_projection(
            ConvexSet::halfspace(Vector::new(vec![0.0, 1.0]).unwrap(), 0.0).unwrap(),
        )
        .unwrap(),
    ];
    c.bench_function("halpern_2000_iters", |b| {
        b.iter(|| {
            let mut cfg = RunConfig::new(Vector::new(vec![3.0, -1.0]).unwrap())
                .with_anchor(Vector::new(vec![1.0, 2.0]).unwrap());
            cfg.max_iters = 2000;
            cfg.residual_tol = 1e-15;
            schemes::halpern(black_box(&ops), &Schedule::harmonic(), &cfg).unwrap()
        })
    });
}

fn bench_dykstra(c: &mut Criterion) {
    let dim = 10;
    let sets: Vec<ConvexSet> = (0..3)
        .map(|i| ConvexSet::halfspace(vector(dim, 11 + i), -0.25).unwrap())
        .collect();
    let x = vector(dim, 99).scale(8.0).unwrap();
    let cfg = OracleConfig::default();
    c.bench_function("dykstra_3_halfspaces_r10", |b| {
        b.iter(|| project_intersection(black_box(&sets), black_box(&x), &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    bench_projections,
    bench_selection,
    bench_halpern_run,
    bench_dykstra
);
criterion_main!(benches);
