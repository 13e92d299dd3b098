use criterion::{criterion_group, criterion_main, Criterion};
use quadembed::{check_conditions, detach, plan, verify_certificate, DetachConfig};
use quadembed_bench::{fixture, interval_system, params};
use std::hint::black_box;

fn conditions(c: &mut Criterion) {
    let p = params(28, 38, 1, 2);
    c.bench_function("check_conditions 28 38 1 2", |b| {
        b.iter(|| check_conditions(black_box(&p)))
    });
}

fn planning(c: &mut Criterion) {
    let p = params(28, 38, 1, 2);
    c.bench_function("plan 28 38 1 2", |b| {
        b.iter(|| plan(black_box(&p)).unwrap())
    });
    let p = params(12, 18, 1, 2);
    c.bench_function("plan 12 18 1 2", |b| {
        b.iter(|| plan(black_box(&p)).unwrap())
    });
}

fn intervals(c: &mut Criterion) {
    let sys = interval_system(500);
    c.bench_function("interval solve 500", |b| b.iter(|| black_box(&sys).solve()));
}

fn detachment(c: &mut Criterion) {
    let p = params(6, 8, 2, 5);
    let base = fixture().levels[0].clone();
    let pl = plan(&p).unwrap();
    c.bench_function("detach 6 8 2 5", |b| {
        b.iter(|| detach(black_box(&p), &base, &pl, DetachConfig::default()).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    let cert = fixture();
    c.bench_function("verify fixture chain", |b| {
        b.iter(|| verify_certificate(black_box(&cert)))
    });
}

criterion_group!(
    benches,
    conditions,
    planning,
    intervals,
    detachment,
    verification
);
criterion_main!(benches);
