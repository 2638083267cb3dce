use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use glhom::exact::rat;
use glhom::oracle::{ff_make, hom_count_with, nilpotent_count_with};
use glhom::{AbelianPGroup, Exec, TruncatedSeries};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("bruteforce");
    group.sample_size(10);
    let f3 = ff_make(3, 1).unwrap();
    let f2 = ff_make(2, 1).unwrap();
    let c2 = AbelianPGroup::from_factors(2, &[1]).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("hom C_2 GL_3(F_3)", name), &exec, |b, &exec| {
            b.iter(|| hom_count_with(black_box(&c2), &f3, 3, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nilpotent 4x4 F_2", name), &exec, |b, &exec| {
            b.iter(|| nilpotent_count_with(black_box(4), &f2, 2, exec).unwrap())
        });
    }
    group.finish();
}

fn series_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_mul");
    let order = 200;
    let a = TruncatedSeries::new(order, (0..=order as i64).map(|k| rat(k + 1, k % 7 + 1)).collect());
    let b = TruncatedSeries::new(order, (0..=order as i64).map(|k| rat(1 - k, k % 5 + 2)).collect());
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("order 200", name), &exec, |bench, &exec| {
            bench.iter(|| black_box(&a).mul_with(black_box(&b), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, series_product);
criterion_main!(benches);
