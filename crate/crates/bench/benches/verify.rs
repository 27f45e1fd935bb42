use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tempo_ncg::harness::{
    fixtures, random_host, seeded_rng, sweep_ownership, RandomHostParams, SweepConfig,
};
use tempo_ncg::{
    dense_cycle_instance, earliest_arrivals, hypercube_equilibrium, is_greedy_equilibrium,
    is_nash_equilibrium, min_terminal_spanner, realized_graph, scale_with_nonterminals, Setting,
    SpannerSearchConfig,
};

const BUDGET: u64 = 20_000_000;

fn reachability(c: &mut Criterion) {
    let mut group = c.benchmark_group("earliest_arrivals");
    for x in [2, 4, 6] {
        let d = dense_cycle_instance(x).unwrap();
        let source = d.host.nodes()[0].clone();
        group.bench_with_input(BenchmarkId::new("dense_cycle", x), &d.g_prime, |b, g| {
            b.iter(|| earliest_arrivals(black_box(g), &source).unwrap())
        });
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    let right = fixtures::fig5_right();
    let s = right.profile.clone().unwrap();
    group.bench_function("ne/fig5_right", |b| {
        b.iter(|| is_nash_equilibrium(black_box(&s), &right.host, BUDGET).unwrap())
    });

    let d = dense_cycle_instance(2).unwrap();
    group.bench_function("ne/dense_cycle_2", |b| {
        b.iter(|| is_nash_equilibrium(black_box(&d.profile), &d.host, BUDGET).unwrap())
    });
    for x in [4, 6] {
        let d = dense_cycle_instance(x).unwrap();
        group.bench_with_input(BenchmarkId::new("ge/dense_cycle", x), &d, |b, d| {
            b.iter(|| is_greedy_equilibrium(black_box(&d.profile), &d.host).unwrap())
        });
    }

    let (h, s) = hypercube_equilibrium(3).unwrap();
    let (h, s) = scale_with_nonterminals(&h, &s, 3).unwrap();
    group.bench_function("ne/scaled_hypercube", |b| {
        b.iter(|| is_nash_equilibrium(black_box(&s), &h, BUDGET).unwrap())
    });
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let fig4 = fixtures::fig4();
    let g = realized_graph(fig4.profile.as_ref().unwrap(), &fig4.host).unwrap();
    group.bench_function("fig4/global", |b| {
        b.iter(|| {
            sweep_ownership(
                &fig4.host,
                black_box(&g),
                Setting::Global,
                SweepConfig::default(),
            )
            .unwrap()
        })
    });
    let right = fixtures::fig5_right();
    let g = realized_graph(right.profile.as_ref().unwrap(), &right.host).unwrap();
    let cfg = SweepConfig {
        prefilter: true,
        ..SweepConfig::default()
    };
    group.bench_function("fig5_right/global_prefilter", |b| {
        b.iter(|| sweep_ownership(&right.host, black_box(&g), Setting::Global, cfg).unwrap())
    });
    group.finish();
}

fn optimum(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_terminal_spanner");
    group.sample_size(10);
    for n in [4, 5, 6] {
        let p = RandomHostParams {
            n,
            k: n / 2,
            max_label: 2 * n as u32,
            max_labels_per_edge: 1,
        };
        let h = random_host(p, &mut seeded_rng(n as u64)).unwrap();
        group.bench_with_input(BenchmarkId::new("random", n), &h, |b, h| {
            b.iter(|| min_terminal_spanner(black_box(h), SpannerSearchConfig::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, reachability, verification, sweeps, optimum);
criterion_main!(benches);
