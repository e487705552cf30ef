//! Sequential against data-parallel evaluation, and naive against optimised
//! paths. Build with `--no-default-features` to time the sequential fallback
//! of the scheduler itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use modal_core::{
    default_mode_mapping, default_radial_grid, gauss_legendre, legendre_table, synthesize_basis,
    BasisTables, H2Mode, Integrator, LegendreTable, Modal2d, Modal3d, ModeMapping, PeakProfile,
    QuadratureRule, RadialGrid, DEFAULT_BLOCK, DEFAULT_PTABLE_BUDGET,
};

struct Setup {
    grid: RadialGrid,
    tables: BasisTables,
    mapping: ModeMapping,
    rule: QuadratureRule,
    legendre: LegendreTable,
}

fn setup(l_max: usize, p_max: usize, radial: usize) -> Setup {
    let profile = PeakProfile::default();
    let grid = default_radial_grid(radial, &profile).unwrap();
    let tables = synthesize_basis(p_max, 2, l_max, &grid, &profile).unwrap();
    let mapping = default_mode_mapping(p_max).unwrap();
    let rule = gauss_legendre(QuadratureRule::exact_order_for(l_max)).unwrap();
    let legendre = legendre_table(l_max, &rule);
    Setup { grid, tables, mapping, rule, legendre }
}

fn worker_counts() -> Vec<usize> {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut counts = vec![1];
    if cores > 1 {
        counts.push(cores);
    }
    counts
}

fn modal3d_workers(c: &mut Criterion) {
    let s = setup(48, 4, 216);
    let engine =
        Modal3d::new(&s.tables, &s.grid, &s.mapping, Integrator::Trapezium, H2Mode::Gosper).unwrap();
    let mut group = c.benchmark_group("modal3d");
    group.sample_size(10);
    group.throughput(Throughput::Elements(engine.domain().len() as u64));
    for workers in worker_counts() {
        group.bench_with_input(BenchmarkId::new("blocked", workers), &workers, |b, &w| {
            b.iter(|| engine.matrix(DEFAULT_BLOCK, w).unwrap())
        });
    }
    group.bench_function("naive", |b| b.iter(|| engine.matrix_naive().unwrap()));
    group.finish();
}

fn modal3d_block(c: &mut Criterion) {
    let s = setup(48, 4, 216);
    let engine =
        Modal3d::new(&s.tables, &s.grid, &s.mapping, Integrator::Trapezium, H2Mode::Gosper).unwrap();
    let mut group = c.benchmark_group("modal3d-block");
    group.sample_size(10);
    for block in [1, 16, 64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(block), &block, |b, &block| {
            b.iter(|| engine.matrix(block, 1).unwrap())
        });
    }
    group.finish();
}

fn modal2d_workers(c: &mut Criterion) {
    let s = setup(64, 4, 216);
    let engine =
        Modal2d::new(&s.tables, &s.grid, &s.mapping, &s.rule, &s.legendre, Integrator::Trapezium)
            .unwrap();
    let n = engine.n_max();
    let mut group = c.benchmark_group("modal2d");
    group.sample_size(10);
    group.throughput(Throughput::Elements((n * n) as u64));
    for workers in worker_counts() {
        group.bench_with_input(BenchmarkId::new("ptable", workers), &workers, |b, &w| {
            b.iter(|| {
                let ptable = engine.build_ptable(DEFAULT_PTABLE_BUDGET, w).unwrap();
                engine.matrix(&ptable, w).unwrap()
            })
        });
    }
    group.finish();

    // One cell at a time, so the naive path stays affordable.
    let ptable = engine.build_ptable(DEFAULT_PTABLE_BUDGET, 1).unwrap();
    let mut group = c.benchmark_group("modal2d-entry");
    group.sample_size(10);
    group.bench_function("naive", |b| b.iter(|| engine.entry_naive(3, 7).unwrap()));
    group.bench_function("ptable", |b| b.iter(|| engine.entry(&ptable, 3, 7).unwrap()));
    group.finish();
}

criterion_group!(benches, modal3d_workers, modal3d_block, modal2d_workers);
criterion_main!(benches);
