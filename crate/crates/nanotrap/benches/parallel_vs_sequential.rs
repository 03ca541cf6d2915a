//! Compares the data-parallel core against its single-threaded fallback on
//! the two embarrassingly parallel hot paths: per-point diagonalization of
//! the grid Hamiltonian and design-table generation.
//!
//! Build with default features to get the rayon path; `diagonalize_grid` and
//! `generate_table` dispatch to the sequential implementations when the
//! `parallel` feature is off, in which case both sides of each comparison
//! measure the same code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nanotrap::adiabatic::{diagonalize_grid, diagonalize_grid_sequential, SpatialGrid};
use nanotrap::design::{
    calibrated_gamma_yb, generate_table, generate_table_sequential, reference_rows, DesignRow,
};
use nanotrap::schemes::{ControlProfile, Scheme, SchemeConfig};
use nanotrap::units::{AngularFrequency, AtomSpecies, Length};
use std::hint::black_box;

fn eit_config() -> SchemeConfig {
    let mut config = SchemeConfig::new(
        Scheme::Eit,
        AtomSpecies::yb171(),
        ControlProfile::GaussianDip {
            omega0: AngularFrequency::from_hz(2e6),
            sigma: Length::from_meters(1e-6).unwrap(),
        },
    );
    config.omega_p = AngularFrequency::from_hz(2e4);
    config
}

fn bench_diagonalize(c: &mut Criterion) {
    let config = eit_config();
    let mut group = c.benchmark_group("diagonalize_grid");
    for n in [1024usize, 4096] {
        let grid = SpatialGrid::symmetric(1e-6, n).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", n), &grid, |b, grid| {
            b.iter(|| diagonalize_grid(|x| config.hamiltonian(x), black_box(grid)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &grid, |b, grid| {
            b.iter(|| {
                diagonalize_grid_sequential(|x| config.hamiltonian(x), black_box(grid)).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_design_table(c: &mut Criterion) {
    let species = AtomSpecies::yb171();
    let gamma = calibrated_gamma_yb();
    // The reference grid tiled out to a few hundred rows.
    let rows: Vec<DesignRow> = (0..20).flat_map(|_| reference_rows(0.1)).collect();
    let mut group = c.benchmark_group("generate_table");
    group.bench_function("parallel", |b| {
        b.iter(|| generate_table(Scheme::Eit, &species, black_box(&rows), gamma))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| generate_table_sequential(Scheme::Eit, &species, black_box(&rows), gamma))
    });
    group.finish();
}

criterion_group!(benches, bench_diagonalize, bench_design_table);
criterion_main!(benches);
