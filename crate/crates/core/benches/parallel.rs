//! Sequential against data-parallel execution of the two heaviest kernels.
//! Without the `parallel` feature both variants run the same loop.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fockbench::distributions::{waiting_time_simulate, NegBinomialParams};
use fockbench::measure::{resolution_check, MeasureSpec};
use fockbench::Execution;

const POLICIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn waiting_time(c: &mut Criterion) {
    let p = NegBinomialParams::new(0.3, 3.0).unwrap();
    let mut g = c.benchmark_group("waiting_time_1e6");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| waiting_time_simulate(&p, black_box(1_000_000), 7, exec).unwrap())
        });
    }
    g.finish();
}

fn resolution(c: &mut Criterion) {
    let spec = MeasureSpec::new(2, 2, 24).unwrap();
    let mut g = c.benchmark_group("resolution_r2_m2_24");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| resolution_check(black_box(&spec), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, waiting_time, resolution);
criterion_main!(benches);
