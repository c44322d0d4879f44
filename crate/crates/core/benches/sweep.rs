use std::hint::black_box;

use amcurve::chain::{build_chain, semigroup_sampling_oracle, verify_sweep};
use amcurve::charseq::{enumerate_am_with, CharSequence};
use amcurve::numeric::CoeffDomain;
use amcurve::par::ExecMode;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_am");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 720), &mode, |b, &mode| {
            b.iter(|| enumerate_am_with(black_box(720), mode).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_sweep");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 16), &mode, |b, &mode| {
            b.iter(|| verify_sweep(black_box(16), CoeffDomain::Rational, mode).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let r = CharSequence::from_u64s(&[24, 16, 68, 142, 287]).unwrap();
    let chain = build_chain(&r, CoeffDomain::Rational).unwrap();
    let mut g = c.benchmark_group("sampling_oracle");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 200), &mode, |b, &mode| {
            b.iter(|| semigroup_sampling_oracle(&chain, black_box(200), 6, 42, mode).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, enumerate, sweep, oracle);
criterion_main!(benches);
