//! Microbenchmarks for the hot kernels: spectral differentiation, curve
//! geometry assembly, the functionals, and a single flow step.

use std::f64::consts::TAU;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use warpflow::{evolve, spectral, stable_dt, step, FlowConfig, RadialCurve, WarpPotential};

fn wavy(warp: &Arc<WarpPotential>, n: usize) -> RadialCurve {
    let rho = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            1.0 + 0.3 * (2.0 * t).cos() + 0.05 * (5.0 * t).sin()
        })
        .collect();
    RadialCurve::from_samples(warp.clone(), rho).unwrap()
}

fn bench_spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_derivatives");
    for n in [128usize, 512, 2048] {
        let f: Vec<f64> = (0..n)
            .map(|j| (TAU * j as f64 / n as f64).sin().exp())
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| spectral::derivatives(f))
        });
    }
    group.finish();
}

fn bench_geometry(c: &mut Criterion) {
    let warp = Arc::new(WarpPotential::sphere(1.0, 0.0).unwrap());
    let mut group = c.benchmark_group("curve_geometry");
    for n in [128usize, 512, 2048] {
        let curve = wavy(&warp, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &curve, |b, curve| {
            b.iter(|| curve.geometry().unwrap())
        });
    }
    group.finish();
}

fn bench_functionals(c: &mut Criterion) {
    let warp = Arc::new(WarpPotential::euclidean((0.001, 10.0)).unwrap());
    let curve = wavy(&warp, 512);
    c.bench_function("functionals_512", |b| {
        b.iter(|| curve.functionals().unwrap())
    });
}

fn bench_flow_step(c: &mut Criterion) {
    let warp = Arc::new(WarpPotential::euclidean((0.001, 10.0)).unwrap());
    let mut group = c.benchmark_group("flow_step");
    for n in [128usize, 512] {
        let curve = wavy(&warp, n);
        let dt = stable_dt(&curve, 0.5).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &curve, |b, curve| {
            b.iter(|| step(curve, dt).unwrap())
        });
    }
    group.finish();
}

fn bench_evolve_short(c: &mut Criterion) {
    let warp = Arc::new(WarpPotential::euclidean((0.001, 10.0)).unwrap());
    let curve = wavy(&warp, 128);
    let config = FlowConfig {
        t_max: 0.01,
        sample_every: 1_000_000,
        ..FlowConfig::default()
    };
    c.bench_function("evolve_128_t0.01", |b| {
        b.iter(|| evolve(&curve, &config).unwrap())
    });
}

criterion_group!(
    kernels,
    bench_spectral,
    bench_geometry,
    bench_functionals,
    bench_flow_step,
    bench_evolve_short
);
criterion_main!(kernels);
