use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flowmech::audits::{audit_corpus, CorpusConfig, Property};
use flowmech::cuts::enumerate_minimal_cuts_with;
use flowmech::game::CharacteristicCache;
use flowmech::mechanisms::{shapley_with, Mechanism};
use flowmech::random::{random_network, CapLattice};
use flowmech::{Execution, FlowNetwork};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn wide_network() -> FlowNetwork {
    // 12 edges keeps the 2^m coalition table large enough to matter
    random_network(7, 8, 12, CapLattice::default()).unwrap()
}

fn coalition_table(c: &mut Criterion) {
    let net = wide_network();
    let caps = net.capacities();
    let mut group = c.benchmark_group("coalition_table");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| CharacteristicCache::build_with(black_box(&net), &caps, exec).unwrap())
        });
    }
    group.finish();
}

fn shapley(c: &mut Criterion) {
    let net = wide_network();
    let caps = net.capacities();
    let mut group = c.benchmark_group("shapley");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| shapley_with(black_box(&net), &caps, exec).unwrap())
        });
    }
    group.finish();
}

fn minimal_cuts(c: &mut Criterion) {
    let net = random_network(11, 12, 20, CapLattice::default()).unwrap();
    let caps = net.capacities();
    let mut group = c.benchmark_group("minimal_cuts");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_minimal_cuts_with(black_box(&net), &caps, exec).unwrap())
        });
    }
    group.finish();
}

fn corpus(c: &mut Criterion) {
    let config = CorpusConfig {
        networks: 16,
        ..CorpusConfig::default()
    };
    let properties = [Property::Dsic, Property::Sir, Property::Cm];
    let mut group = c.benchmark_group("corpus_audit");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| audit_corpus(black_box(&config), Mechanism::Mc, &properties, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, coalition_table, shapley, minimal_cuts, corpus);
criterion_main!(benches);
