use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use imgchain::imagecore::{gaussian_blur, rotate};
use imgchain::phash::{compare, hash_image, AlgorithmId};
use imgchain_bench::sample_image;

fn hashes(c: &mut Criterion) {
    let img = sample_image();
    let mut group = c.benchmark_group("hash");
    for algo in AlgorithmId::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(algo), &algo, |b, &algo| {
            b.iter(|| hash_image(algo, black_box(&img)))
        });
    }
    group.finish();

    let other = rotate(&img, 10.0);
    let mut group = c.benchmark_group("compare");
    for algo in AlgorithmId::ALL {
        let (x, y) = (hash_image(algo, &img), hash_image(algo, &other));
        group.bench_with_input(BenchmarkId::from_parameter(algo), &algo, |b, &algo| {
            b.iter(|| compare(algo, black_box(&x), black_box(&y)))
        });
    }
    group.finish();
}

fn attacks(c: &mut Criterion) {
    let img = sample_image();
    c.bench_function("blur 45%", |b| b.iter(|| gaussian_blur(black_box(&img), 45.0)));
    c.bench_function("rotate 30deg", |b| b.iter(|| rotate(black_box(&img), 30.0)));
}

criterion_group!(benches, hashes, attacks);
criterion_main!(benches);
