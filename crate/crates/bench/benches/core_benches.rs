use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use holomet_core::disc::{poincare_distance, DiscPoint};
use holomet_core::metric::convexity_modulus;
use holomet_core::solver::solve;
use holomet_core::{ComplexVector, SolveConfig, SpaceSignature};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bench_disc(cr: &mut Criterion) {
    let z = DiscPoint::new(c(0.31, -0.42)).unwrap();
    let w = DiscPoint::new(c(-0.55, 0.13)).unwrap();
    cr.bench_function("poincare_distance", |b| {
        b.iter(|| poincare_distance(black_box(z), black_box(w)))
    });
}

fn bench_solver(cr: &mut Criterion) {
    let space = SpaceSignature::lp(2, 2.0).unwrap();
    let x = ComplexVector::new(space, vec![c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
    let y = ComplexVector::new(space, vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
    let cfg = SolveConfig::default();
    cr.bench_function("solve_l2_canonical_pair", |b| {
        b.iter(|| solve(black_box(&x), black_box(&y), &cfg).unwrap())
    });

    let space = SpaceSignature::lp(3, 1.5).unwrap();
    let x3 = ComplexVector::new(space, vec![c(0.3, 0.1), c(-0.1, 0.2), c(0.05, -0.15)]).unwrap();
    let y3 = ComplexVector::new(space, vec![c(-0.2, 0.0), c(0.25, -0.1), c(0.1, 0.2)]).unwrap();
    cr.bench_function("solve_l15_dim3", |b| {
        b.iter(|| solve(black_box(&x3), black_box(&y3), &cfg).unwrap())
    });
}

fn bench_family(cr: &mut Criterion) {
    let params = holomet_core::GeodesicParams::admissible(
        SpaceSignature::lp(3, 1.5).unwrap(),
        vec![c(0.4, 0.1), c(-0.2, 0.3), c(0.1, -0.4)],
        vec![1, 1, 0],
        &[1.0, 0.6, 0.4],
        &[0.2, -1.1, 0.7],
    )
    .unwrap();
    cr.bench_function("boundary_trace_512", |b| {
        b.iter(|| params.boundary_trace(black_box(512)).unwrap())
    });
}

fn bench_modulus(cr: &mut Criterion) {
    let space = SpaceSignature::lp(2, 1.0).unwrap();
    cr.bench_function("convexity_modulus_l1_eps01", |b| {
        b.iter(|| convexity_modulus(black_box(space), 0.1, 4, 0).unwrap())
    });
}

criterion_group!(benches, bench_disc, bench_solver, bench_family, bench_modulus);
criterion_main!(benches);
