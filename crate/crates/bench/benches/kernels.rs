use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use phi4_core::elliptic::{complete_k, jacobi_sncndn};
use phi4_core::evolve::{FieldState, Stepper};
use phi4_core::spectral::{build_hill, eigensolve};
use phi4_core::wave_families::solve_family;
use phi4_core::{Family, HillLabel};

fn elliptic(c: &mut Criterion) {
    c.bench_function("complete_k", |b| b.iter(|| complete_k(black_box(0.95)).unwrap()));
    c.bench_function("jacobi_sncndn", |b| b.iter(|| jacobi_sncndn(black_box(7.3), black_box(0.8)).unwrap()));
}

fn families(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_family");
    for family in Family::ALL {
        let (period, speed) = match family {
            Family::SnSubluminal => (4.0 * PI, 0.5),
            Family::SnComplexStanding => (2.0 * PI, 1.0),
            _ => (2.0 * PI, 1.5),
        };
        g.bench_function(family.name(), |b| {
            b.iter(|| solve_family(family, black_box(period), black_box(speed)).unwrap())
        });
    }
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.3).unwrap();
    let mut g = c.benchmark_group("eigensolve");
    g.sample_size(10);
    for n in [64usize, 128, 256] {
        let m = build_hill(&p, HillLabel::SnReal, n).unwrap().matrix().unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| eigensolve(m, 4, "bench").unwrap()));
    }
    g.finish();
}

fn split_step(c: &mut Criterion) {
    let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.5).unwrap();
    let mut g = c.benchmark_group("split_step");
    for n in [128usize, 256, 1024] {
        let mut stepper = Stepper::new(n, p.period, 1e-3).unwrap();
        let mut state = FieldState::from_wave(&p, n).unwrap();
        g.bench_function(BenchmarkId::from_parameter(n), |b| b.iter(|| stepper.step(&mut state)));
    }
    g.finish();
}

criterion_group!(benches, elliptic, families, spectra, split_step);
criterion_main!(benches);
