use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rexosc_core::model::{re_potential, OscillatorSpec, REConfig};
use rexosc_core::numerics::{lowest_eigenvalues, TridiagonalMatrix};
use rexosc_core::poly::{exceptional_hermite, pseudo_hermite};
use rexosc_core::transform::CouplingValue;

fn polynomials(c: &mut Criterion) {
    c.bench_function("exceptional_hermite m=4 index=12", |b| {
        b.iter(|| exceptional_hermite(black_box(4), black_box(12)).unwrap())
    });
    let p = pseudo_hermite(6).unwrap();
    c.bench_function("pseudo_hermite m=6 real roots", |b| b.iter(|| p.count_real_roots(-10.0, 10.0).unwrap()));
}

fn potentials(c: &mut Criterion) {
    let spec = OscillatorSpec::quadratic_2d(1.0, 3.0, CouplingValue::imaginary(7f64.sqrt())).unwrap();
    let cfg = REConfig::new(vec![2, 2]).unwrap();
    let p = [Complex64::new(0.3, 0.0), Complex64::new(-0.7, 0.0)];
    c.bench_function("re_potential 2D imaginary (2,2)", |b| {
        b.iter(|| re_potential(&spec, &cfg, black_box(&p)).unwrap())
    });
}

fn tridiagonal(c: &mut Criterion) {
    let n = 2000;
    let h = 24.0 / (n + 1) as f64;
    let diag: Vec<f64> = (1..=n).map(|i| 2.0 / (h * h) + (-12.0 + i as f64 * h).powi(2)).collect();
    let off = vec![-1.0 / (h * h); n - 1];
    let m = TridiagonalMatrix::new(diag, off).unwrap();
    c.bench_function("lowest 5 eigenvalues, N=2000", |b| b.iter(|| lowest_eigenvalues(black_box(&m), 5).unwrap()));
}

criterion_group!(benches, polynomials, potentials, tridiagonal);
criterion_main!(benches);
