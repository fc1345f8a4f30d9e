use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpgroupoid::gpd::pair;
use lpgroupoid::lprep::{fp_norm, PNorm, SolverConfig};
use lpgroupoid::par::{self, ExecMode};
use lpgroupoid::recon::{catalog, reconstruct, ReconOptions};
use lpgroupoid::sample::{random_element, stream_rng};
use lpgroupoid::structure::{contraction, mp_inverse_by_search, AlgebraContext, NormKind};

const MODES: [(&str, ExecMode); 2] = [
    ("parallel", ExecMode::Parallel),
    ("sequential", ExecMode::Sequential),
];

fn norm_solver(c: &mut Criterion) {
    let g = pair(4);
    let p = PNorm::new(1.5).unwrap();
    let f = random_element(&g, &mut stream_rng(1, 0));
    let mut group = c.benchmark_group("norm_solver");
    for (name, mode) in MODES {
        let cfg = SolverConfig::default().with_mode(mode).without_shortcut();
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| fp_norm(&g, black_box(&f), p, &cfg).unwrap())
        });
    }
    group.finish();
}

fn mp_search(c: &mut Criterion) {
    let g = pair(2);
    let kind = NormKind::Fp(PNorm::new(3.0).unwrap());
    let setup = AlgebraContext::new(&g, kind);
    let elements: Vec<_> = (0..64)
        .map(|i| contraction(&setup, random_element(&g, &mut stream_rng(2, i))).unwrap())
        .collect();
    let mut group = c.benchmark_group("mp_search");
    group.sample_size(10);
    for (name, mode) in MODES {
        let ctx =
            AlgebraContext::new(&g, kind).with_solver(SolverConfig::default().with_mode(mode));
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::try_map_indexed(mode, elements.len(), |i| {
                    mp_inverse_by_search(&ctx, &elements[i])
                })
                .unwrap()
            })
        });
    }
    group.finish();
}

fn catalog_reconstruction(c: &mut Criterion) {
    let groupoids = catalog();
    let kind = NormKind::Fp(PNorm::new(1.5).unwrap());
    let mut group = c.benchmark_group("catalog_reconstruction");
    group.sample_size(10);
    for (name, mode) in MODES {
        let opts = ReconOptions {
            solver: SolverConfig::default().with_mode(mode),
            ..ReconOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::try_map_indexed(mode, groupoids.len(), |i| {
                    reconstruct(&groupoids[i].1, kind, &opts)
                })
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, norm_solver, mp_search, catalog_reconstruction);
criterion_main!(benches);
