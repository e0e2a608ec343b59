use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hardy_core::exec::Execution;
use hardy_core::make_params;
use hardy_core::radial::sharpness_scan_with;
use hardy_core::rearrange_lorentz::{exhaustive_sweep, ConvexCost, PowerKernel};

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn lattice_sweep(c: &mut Criterion) {
    let kernel = PowerKernel::new(1.5).unwrap();
    let mut group = c.benchmark_group("exhaustive_sweep_m3_v3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exhaustive_sweep(3, 3, &kernel, ConvexCost::Power(2.0), exec).unwrap())
        });
    }
    group.finish();
}

fn sharpness(c: &mut Criterion) {
    let params = make_params(2, 0.5, 2.0).unwrap();
    let n_list = [10, 100, 1_000, 10_000];
    let mut group = c.benchmark_group("sharpness_scan_2_0.5_2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sharpness_scan_with(&params, &n_list, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lattice_sweep, sharpness);
criterion_main!(benches);
