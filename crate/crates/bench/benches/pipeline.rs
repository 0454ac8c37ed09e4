use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mcg_cli::{run_sweep, AlphaRange, Analyses, SweepSpec};
use mcg_core::analyze::{detect_double_spiral, lyapunov_spectrum, spiral_period, LyapunovSettings};
use mcg_core::{integrate, AnalysisSettings, IntegrationSettings, ModelParams, DEFAULT_INITIAL};

fn integration(c: &mut Criterion) {
    let p = ModelParams::study(0.5).unwrap();
    let cfg = IntegrationSettings { t_end: 200.0, t_skip: 0.0, ..Default::default() };
    c.bench_function("rk4 trajectory, t=200", |b| b.iter(|| integrate(black_box(&p), DEFAULT_INITIAL, &cfg).unwrap()));
    let adaptive = IntegrationSettings { method: mcg_core::Method::DEFAULT_ADAPTIVE, ..cfg };
    c.bench_function("dopri45 trajectory, t=200", |b| {
        b.iter(|| integrate(black_box(&p), DEFAULT_INITIAL, &adaptive).unwrap())
    });
}

fn spectrum(c: &mut Criterion) {
    let p = ModelParams::study(0.5).unwrap();
    let cfg = LyapunovSettings { transient: 50.0, averaging_time: 200.0, ..Default::default() };
    c.bench_function("lyapunov spectrum, averaging 200", |b| {
        b.iter(|| lyapunov_spectrum(black_box(&p), DEFAULT_INITIAL, &cfg).unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let p = ModelParams::study(1.2).unwrap();
    let traj = integrate(&p, DEFAULT_INITIAL, &IntegrationSettings::default()).unwrap();
    c.bench_function("double-spiral test, 75k samples", |b| {
        b.iter(|| detect_double_spiral(black_box(&traj), 0.05).unwrap())
    });
    c.bench_function("period per lobe", |b| b.iter(|| spiral_period(black_box(&traj), 0.02).unwrap()));
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec {
        range: AlphaRange { min: 0.1, max: 0.3, step: 0.05 },
        base: ModelParams::study(1.0).unwrap(),
        integration: IntegrationSettings { t_end: 300.0, t_skip: 100.0, ..Default::default() },
        initial: DEFAULT_INITIAL,
        analysis: AnalysisSettings::default(),
        analyses: Analyses { maxima: true, lce: false, classify: false },
        workers: 2,
    };
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("5 alphas, maxima only", |b| b.iter(|| run_sweep(black_box(&spec)).unwrap()));
    g.finish();
}

criterion_group!(benches, integration, spectrum, geometry, sweep);
criterion_main!(benches);
