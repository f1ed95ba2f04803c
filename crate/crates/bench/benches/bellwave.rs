use std::hint::black_box;

use bellwave_core::chsh::bell_closed;
use bellwave_core::correlator::correlators_numeric;
use bellwave_core::quadrature::hermite_rule;
use bellwave_core::units::from_dimensionless;
use bellwave_core::{AnalyzerSettings, DimensionlessPoint, NumericOptions, ZetaGrid};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn closed_form(c: &mut Criterion) {
    let pts: Vec<DimensionlessPoint> = ZetaGrid::linear(0.0, 5.0, 501)
        .points()
        .unwrap()
        .into_iter()
        .map(|z| DimensionlessPoint::new(z, 1.0).unwrap())
        .collect();
    c.bench_function("bell_closed/501", |b| {
        b.iter(|| {
            pts.iter()
                .map(|p| bell_closed(black_box(p)).bell)
                .sum::<f64>()
        })
    });
}

fn rules(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermite_rule");
    for n in [16, 64, 256] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| hermite_rule(black_box(n)).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let pairs = AnalyzerSettings::default().pairs();
    let opts = NumericOptions::default();
    let mut g = c.benchmark_group("correlators_numeric");
    g.sample_size(10);
    for (zeta, kappa) in [(0.5, 0.5), (2.0, 1.0)] {
        let cfg = from_dimensionless(DimensionlessPoint::new(zeta, kappa).unwrap(), 1000.0, false)
            .unwrap();
        g.bench_function(format!("zeta={zeta},kappa={kappa}"), |b| {
            b.iter(|| correlators_numeric(black_box(&pairs), &cfg, &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, closed_form, rules, oracle);
criterion_main!(benches);
