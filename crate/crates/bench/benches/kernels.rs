use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qentangle_bench::{critical_ising, random_mixed, random_pure};
use qentangle_core::area_law::{purity_via_swap, SwapMode};
use qentangle_core::measures::{entanglement_entropy, negativity};
use qentangle_core::models::{gibbs_state, ground_state};
use qentangle_core::mps::{dense_to_mps, variational_ground_search, VariationalOptions};
use qentangle_core::protocols::{chsh_play, GameMode, GameStrategy};
use qentangle_core::RegionPartition;
use std::hint::black_box;

fn measures(c: &mut Criterion) {
    let mut g = c.benchmark_group("measures");
    for n in [8, 12] {
        let psi = random_pure(n, 1);
        let part = RegionPartition::chain(n, &(0..n / 2).collect::<Vec<_>>()).unwrap();
        g.bench_with_input(BenchmarkId::new("entanglement_entropy", n), &n, |b, _| {
            b.iter(|| entanglement_entropy(black_box(&psi), &part).unwrap())
        });
    }
    for n in [4, 6] {
        let rho = random_mixed(n, 2);
        let part = RegionPartition::chain(n, &(0..n / 2).collect::<Vec<_>>()).unwrap();
        g.bench_with_input(BenchmarkId::new("negativity", n), &n, |b, _| b.iter(|| negativity(black_box(&rho), &part).unwrap()));
    }
    g.finish();
}

fn models(c: &mut Criterion) {
    let mut g = c.benchmark_group("models");
    g.sample_size(10);
    let h = critical_ising(10, false);
    g.bench_function("ground_state_ising_10", |b| b.iter(|| ground_state(black_box(&h)).unwrap()));
    let h = critical_ising(6, false);
    g.bench_function("gibbs_state_ising_6", |b| b.iter(|| gibbs_state(black_box(&h), 1.0).unwrap()));
    g.finish();
}

fn mps(c: &mut Criterion) {
    let mut g = c.benchmark_group("mps");
    g.sample_size(10);
    let psi = random_pure(12, 3);
    g.bench_function("dense_to_mps_12_d16", |b| b.iter(|| dense_to_mps(black_box(&psi), 16, 0.0).unwrap()));
    let h = critical_ising(10, true);
    let opts = VariationalOptions { bond_dim: 8, max_sweeps: 4, ..Default::default() };
    g.bench_function("variational_ising_10_d8", |b| b.iter(|| variational_ground_search(black_box(&h), &opts).unwrap()));
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampling");
    let strategy = GameStrategy::standard_quantum();
    g.bench_function("chsh_10k_rounds", |b| {
        b.iter(|| chsh_play(black_box(&strategy), GameMode::Sampled { rounds: 10_000, seed: 0 }).unwrap())
    });
    let rho = random_mixed(6, 4);
    g.bench_function("swap_purity_sampled_6", |b| {
        b.iter(|| purity_via_swap(black_box(&rho), SwapMode::Sampled { shots: 10_000, seed: 0 }).unwrap())
    });
    g.finish();
}

criterion_group!(benches, measures, models, mps, sampling);
criterion_main!(benches);
