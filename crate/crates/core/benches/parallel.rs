//! Single-thread pool against the global pool on the hot loops.
//!
//! Build with `--no-default-features` to time the sequential fallback instead;
//! then both groups run the same plain iterators.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lamesrc::forward::{synthesize_frequency_data_2d, GridField, ReceiverArray};
use lamesrc::greens::point_source_series;
use lamesrc::inversion::{build_operator, KernelKind, KernelPart};
use lamesrc::transforms::{Pulse, VectorPulse};
use lamesrc::{scenario, ElasticMedium};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let n = std::thread::available_parallelism().map_or(1, |n| n.get());
    vec![
        ("1-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("all-threads", rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()),
    ]
}

fn bench_operator(c: &mut Criterion) {
    let m = ElasticMedium::new(2.0, 1.0, 1.0).unwrap();
    let grid = GridField::<f64>::centered_cells(2, 2, 1.0, 32).unwrap().clipped_to(1.0);
    let rec = ReceiverArray::circle(2.0, 64).unwrap();
    let mut g = c.benchmark_group("build_operator");
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| build_operator(KernelKind::Full, KernelPart::Real, &m, 5.0, black_box(&grid), &rec).unwrap()))
        });
    }
    g.finish();
}

fn bench_synthesis(c: &mut Criterion) {
    let m = ElasticMedium::new(2.0, 1.0, 1.0).unwrap();
    let f = scenario::field_grid(48, 1.0, Some(1.0)).unwrap();
    let om = [1.0, 5.0, 10.0, 20.0];
    let gh = Pulse::standard().spectrum(&om);
    let rec = ReceiverArray::circle(2.0, 64).unwrap();
    let mut g = c.benchmark_group("synthesize_2d");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| synthesize_frequency_data_2d(&m, black_box(&f), &gh, &om, &rec).unwrap()))
        });
    }
    g.finish();
}

fn bench_point_source(c: &mut Criterion) {
    let m = ElasticMedium::new(2.0, 1.0, 1.0).unwrap();
    let g = VectorPulse::standard();
    let times: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.01).collect();
    let mut grp = c.benchmark_group("point_source_series");
    for (name, pool) in pools() {
        grp.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| point_source_series(&m, &g, [1.0, 1.0, 0.0], black_box(&times)).unwrap()))
        });
    }
    grp.finish();
}

criterion_group!(benches, bench_operator, bench_synthesis, bench_point_source);
criterion_main!(benches);
