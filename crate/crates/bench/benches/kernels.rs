use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use thetacert_bench::test_matrix;
use thetacert_core::certificate::{build_cycle_dual, check_nondegeneracy, NONDEG_RANK_TOL};
use thetacert_core::theta::{build_problem, solve_default};
use thetacert_core::{eigh, psd_project, ExclusivityGraph};

fn bench_eigh(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_eigh");
    for dim in [6usize, 10, 14, 20] {
        let a = test_matrix(dim);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| eigh(a));
        });
    }
    group.finish();
}

fn bench_psd_project(c: &mut Criterion) {
    let a = test_matrix(14);
    c.bench_function("psd_project_14", |b| b.iter(|| psd_project(&a)));
}

fn bench_theta_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_solve_cycle");
    group.sample_size(10);
    for n in [5usize, 9, 13] {
        let problem = build_problem(ExclusivityGraph::cycle(n).unwrap());
        group.bench_with_input(BenchmarkId::from_parameter(n), &problem, |b, p| {
            b.iter(|| solve_default(p));
        });
    }
    group.finish();
}

fn bench_nondegeneracy(c: &mut Criterion) {
    let mut group = c.benchmark_group("nondegeneracy_check");
    group.sample_size(10);
    for n in [5usize, 9, 13] {
        let graph = ExclusivityGraph::cycle(n).unwrap();
        let cert = build_cycle_dual(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &(graph, cert), |b, (g, z)| {
            b.iter(|| check_nondegeneracy(z, g, NONDEG_RANK_TOL).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_eigh, bench_psd_project, bench_theta_solve, bench_nondegeneracy);
criterion_main!(benches);
