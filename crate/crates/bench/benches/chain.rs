use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use imgchain::chain::{mine_block, sha256, Block};
use imgchain::phash::{hash_all, AlgorithmId};
use imgchain_bench::{sample_image, sample_network};

fn mining(c: &mut Criterion) {
    let img = sample_image();
    let hashes = hash_all(&img, &AlgorithmId::ALL);
    let template = Block::new(1, [0u8; 32], "bench.png", sha256(img.data()), hashes);
    let mut group = c.benchmark_group("mine");
    group.sample_size(20);
    for difficulty in [1u32, 2, 3] {
        group.bench_function(format!("difficulty {difficulty}"), |b| {
            b.iter_batched(
                || template.clone(),
                |block| mine_block(block, difficulty),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn querying(c: &mut Criterion) {
    let network = sample_network();
    let img = sample_image();
    let mut group = c.benchmark_group("network");
    group.sample_size(20);
    group.bench_function("query", |b| b.iter(|| network.query(black_box(&img))));
    group.bench_function("verify chain", |b| b.iter(|| network.chain().verify()));
    group.finish();
}

criterion_group!(benches, mining, querying);
criterion_main!(benches);
