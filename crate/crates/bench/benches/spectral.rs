use criterion::{criterion_group, criterion_main, Criterion};
use hspec::constants::{kappa, KappaInput};
use hspec::field::{random_band, Analyzer, LambdaGrid, PhysicalGrid, WeightKernel};
use hspec::spectral_calculus::{apply, OperatorSpec};
use hspec::weights::{WeightBase, WeightSpec};
use num_complex::Complex64;
use std::hint::black_box;
use std::sync::Arc;

fn transforms(c: &mut Criterion) {
    let grid = Arc::new(LambdaGrid::uniform_for_box(20.0, 10.5).unwrap());
    let kmax = 48;
    let pg = PhysicalGrid::for_grid(1, &grid, kmax, 2).unwrap();
    let an = Analyzer::new(1, kmax, grid.clone(), pg).unwrap();
    let coeffs = random_band(1, kmax, grid, kmax - 8, 0.8, 0, 0).unwrap();
    c.bench_function("synthesize_grid_d1_k48", |b| b.iter(|| an.synthesize_grid(black_box(&coeffs)).unwrap()));
    let samples = an.synthesize_grid(&coeffs).unwrap();
    c.bench_function("analyze_samples_d1_k48", |b| b.iter(|| an.analyze_samples(black_box(&samples), 1e-6).unwrap()));
}

fn multipliers(c: &mut Criterion) {
    let grid = Arc::new(LambdaGrid::default_geometric());
    let coeffs = random_band(2, 48, grid, 40, 0.8, 0, 0).unwrap();
    let op = OperatorSpec::resolvent(OperatorSpec::Conformal(0.75), Complex64::new(1.0, 0.5)).unwrap();
    c.bench_function("apply_conformal_resolvent_d2_k48", |b| b.iter(|| apply(black_box(&op), &coeffs).unwrap()));
}

fn weights(c: &mut Criterion) {
    let grid = Arc::new(LambdaGrid::uniform_for_box(18.0, 9.0).unwrap());
    let pg = PhysicalGrid::for_grid(1, &grid, 24, 2).unwrap();
    let an = Analyzer::new(1, 24, grid.clone(), pg).unwrap();
    let kernel = WeightKernel::new(an.bank().clone(), WeightSpec::plain(WeightBase::W4), 2).unwrap();
    let coeffs = random_band(1, 24, grid, 16, 0.8, 0, 0).unwrap();
    let profiles = an.bank().profiles(&coeffs).unwrap();
    c.bench_function("w4_quad_form_d1_k24", |b| b.iter(|| kernel.quad_form(black_box(&profiles)).unwrap()));
}

fn constants(c: &mut Criterion) {
    let input = KappaInput::new(1.0, 1.0, 1.0, 1.0).unwrap();
    c.bench_function("kappa_flagship", |b| b.iter(|| kappa(black_box(&input)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = transforms, multipliers, weights, constants
}
criterion_main!(benches);
