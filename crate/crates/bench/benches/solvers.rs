use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qitw_core::corpus::{self, rng};
use qitw_core::exact::{exact_chromatic_number, exact_domination_number, exact_treewidth};
use qitw_core::pipeline::PipelineOptions;
use qitw_core::simwidth::{branch_width_sim, simwidth_pipeline, SIMVAL_CAP};
use qitw_core::{centred_check_decomposition, qi_constant, run_pipeline, CentredMode, QuasiIsometryMap};

fn exact_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    for n in [12, 16, 20] {
        let g = corpus::random_connected(&mut rng(n as u64), n, 0.3);
        group.bench_with_input(BenchmarkId::new("chromatic", n), &g, |b, g| {
            b.iter(|| exact_chromatic_number(g, 20).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("domination", n), &g, |b, g| {
            b.iter(|| exact_domination_number(g, 20).unwrap())
        });
    }
    for n in [10, 14] {
        let (g, _) = corpus::k_tree(&mut rng(1), 3, n).unwrap();
        group.bench_with_input(BenchmarkId::new("treewidth", n), &g, |b, g| b.iter(|| exact_treewidth(g, 16).unwrap()));
    }
    group.finish();
}

fn centred_and_qi(c: &mut Criterion) {
    let (g, td) = corpus::k_tree(&mut rng(2), 3, 40).unwrap();
    let td = corpus::coarsen(&mut rng(3), &td, 0.4);
    c.bench_function("centred_check/k-tree-40", |b| {
        b.iter(|| centred_check_decomposition(&g, &td, 3, 2, CentredMode::Exact, 64).unwrap())
    });
    let sub = corpus::subdivided_k_tree(&mut rng(4), 2, 8, 2).unwrap();
    let phi = QuasiIsometryMap::new(&sub.graph, &sub.host, sub.map.clone()).unwrap();
    c.bench_function("qi_constant/subdivided", |b| b.iter(|| qi_constant(&sub.graph, &sub.host, &phi, 100).unwrap()));
}

fn pipelines(c: &mut Criterion) {
    let (g, td) = corpus::k_tree(&mut rng(5), 2, 40).unwrap();
    let opts = PipelineOptions::default();
    c.bench_function("pipeline/k-tree-40", |b| b.iter(|| run_pipeline(&g, &td, 1, 1, &opts).unwrap()));
    let g = corpus::random_connected(&mut rng(6), 20, 0.2);
    let bd = corpus::random_branch_decomposition(&mut rng(7), 20).unwrap();
    c.bench_function("simval/branch-20", |b| b.iter(|| branch_width_sim(&g, &bd, SIMVAL_CAP).unwrap()));
    c.bench_function("sim_pipeline/20", |b| b.iter(|| simwidth_pipeline(&g, &bd, &opts).unwrap()));
}

criterion_group!(benches, exact_solvers, centred_and_qi, pipelines);
criterion_main!(benches);
