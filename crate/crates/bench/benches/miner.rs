use criterion::{criterion_group, criterion_main, Criterion};
use scpm_core::synth::{planted_quasi_cliques, PlantedConfig};
use scpm_core::{build_index, run_naive, run_scpm, Gamma, MinerConfig, QuasiCliqueParams, TopK};

fn mining(c: &mut Criterion) {
    let inst = planted_quasi_cliques(&PlantedConfig {
        background_degree: 20.0,
        ..PlantedConfig::default()
    })
    .unwrap();
    let g = &inst.graph;
    let index = build_index(g);
    let mut cfg = MinerConfig::new(10, QuasiCliqueParams::new(Gamma::new(3, 5).unwrap(), 5).unwrap());
    cfg.eps_min = 0.1;
    cfg.top_k = TopK::Limited(5);

    let mut group = c.benchmark_group("planted");
    group.sample_size(10);
    group.bench_function("scpm", |b| b.iter(|| run_scpm(g, &index, &cfg).unwrap()));
    group.bench_function("naive", |b| b.iter(|| run_naive(g, &index, &cfg).unwrap()));
    group.bench_function("index", |b| b.iter(|| build_index(g)));
    group.finish();
}

criterion_group!(benches, mining);
criterion_main!(benches);
