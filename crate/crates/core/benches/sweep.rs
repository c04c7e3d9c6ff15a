use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ricci::curvature::{curvature_sweep, SweepMode};
use ricci::graph::generate::{hypercube, random_connected};
use ricci::graph::{all_pairs_distances, Graph};
use ricci::measures::lly_measure;
use ricci::par::{self, Execution};
use ricci::rational::rat;
use ricci::transport::wasserstein1;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn graphs() -> Vec<(&'static str, Graph)> {
    vec![("cube5", hypercube(5)), ("random40", random_connected(40, 0.15, 7))]
}

fn edge_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("orc_sweep");
    group.sample_size(10);
    for (name, g) in graphs() {
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), &g, |b, g| {
                b.iter(|| curvature_sweep(black_box(g), &SweepMode::Orc(rat(1, 2)), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn batched_w1(c: &mut Criterion) {
    let g = random_connected(40, 0.15, 11);
    let d = all_pairs_distances(&g);
    let measures: Vec<_> = (0..g.n()).map(|x| lly_measure(&g, x, &rat(1, 4)).unwrap()).collect();
    let pairs: Vec<(usize, usize)> = (0..g.n()).flat_map(|x| (0..g.n()).map(move |y| (x, y))).filter(|(x, y)| x < y).collect();
    let mut group = c.benchmark_group("batched_w1");
    group.sample_size(10);
    for (mode, exec) in MODES {
        group.bench_function(mode, |b| {
            b.iter(|| par::map(&pairs, exec, |&(x, y)| wasserstein1(&measures[x], &measures[y], &d).cost()))
        });
    }
    group.finish();
}

criterion_group!(benches, edge_sweep, batched_w1);
criterion_main!(benches);
