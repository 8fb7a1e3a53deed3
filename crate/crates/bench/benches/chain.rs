use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use swapchain_core::chain::{
    critical_n, exhaustive_search, scan_activation_region, simulate_all_psi, ScanGrid,
};
use swapchain_core::{bell_swap, chsh_report, ppt_report, BellOutcome, ChainParams};

fn params() -> ChainParams {
    ChainParams::new(0.75, 0.45 * PI, 0.3).unwrap()
}

fn primitives(c: &mut Criterion) {
    let pr = params();
    let (l, r) = (pr.rho_l(), pr.rho_1());
    c.bench_function("bell_swap", |b| {
        b.iter(|| bell_swap(black_box(&l), black_box(&r), BellOutcome::PsiPlus).unwrap())
    });
    c.bench_function("chsh_report", |b| b.iter(|| chsh_report(black_box(&l), 1e-9).unwrap()));
    c.bench_function("ppt_report", |b| b.iter(|| ppt_report(black_box(&l), 1e-10).unwrap()));
}

fn chain(c: &mut Criterion) {
    let pr = params();
    c.bench_function("simulate_all_psi k=8", |b| {
        b.iter(|| simulate_all_psi(8, black_box(&pr)).unwrap())
    });
    let slow = ChainParams::new(0.75, 0.45 * PI, 0.01).unwrap();
    c.bench_function("critical_n", |b| b.iter(|| critical_n(black_box(&slow), 4096).unwrap()));

    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("exhaustive m=3", |b| {
        b.iter(|| exhaustive_search(black_box(&pr), 3).unwrap())
    });
    let grid = ScanGrid {
        alpha_steps: 40,
        p_steps: 40,
        ..ScanGrid::default()
    };
    let n_list: Vec<u32> = (1..=10).map(|i| 2 * i).collect();
    group.bench_function("activation scan 40x40", |b| {
        b.iter(|| scan_activation_region(black_box(&grid), &n_list).unwrap())
    });
    group.finish();
}

criterion_group!(benches, primitives, chain);
criterion_main!(benches);
