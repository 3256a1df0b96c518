use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use critpair_bench::random_masks;
use critpair_core::{bitwin, sumset};

fn bench_restricted_sumset_routes(c: &mut Criterion) {
    let masks = random_masks(1024, 60, 7);
    let pairs: Vec<(u64, u64)> = masks
        .chunks_exact(2)
        .map(|w| (w[0], w[1]))
        .collect();

    let mut group = c.benchmark_group("restricted_sumset_window60");
    group.throughput(Throughput::Elements(pairs.len() as u64));
    group.bench_function("bitmask", |b| {
        b.iter(|| {
            let mut acc = 0u32;
            for &(x, y) in &pairs {
                acc ^= bitwin::restricted_sumset_bits(x, y).count_ones();
            }
            black_box(acc)
        })
    });
    group.bench_function("double_loop", |b| {
        let sets: Vec<_> = pairs
            .iter()
            .map(|&(x, y)| {
                (bitwin::intset_from_bits(x as u128), bitwin::intset_from_bits(y as u128))
            })
            .collect();
        b.iter(|| {
            let mut acc = 0usize;
            for (x, y) in &sets {
                acc ^= sumset::restricted_sumset(x, y).unwrap().len();
            }
            black_box(acc)
        })
    });
    group.finish();
}

fn bench_mod_rotation_engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("restricted_sumset_mod");
    for p in [13u32, 61, 97] {
        let masks = random_masks(1024, p.min(63), u64::from(p));
        let pairs: Vec<(u128, u128)> = masks
            .chunks_exact(2)
            .map(|w| (w[0] as u128, w[1] as u128))
            .collect();
        group.throughput(Throughput::Elements(pairs.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(p), &pairs, |b, pairs| {
            b.iter(|| {
                let mut acc = 0u32;
                for &(x, y) in pairs {
                    acc ^= bitwin::restricted_sumset_bits_mod(x, y, p).count_ones();
                }
                black_box(acc)
            })
        });
    }
    group.finish();
}

fn bench_ap_detection(c: &mut Criterion) {
    let sets: Vec<critpair_core::ModSet> = random_masks(256, 13, 3)
        .into_iter()
        .filter(|m| m.count_ones() >= 2)
        .map(|m| bitwin::modset_from_bits(m as u128, 13))
        .collect();
    c.bench_function("detect_ap_mod13", |b| {
        b.iter(|| {
            let mut hits = 0usize;
            for s in &sets {
                hits += usize::from(critpair_core::classify::detect_ap_mod(s).is_some());
            }
            black_box(hits)
        })
    });
}

criterion_group!(benches, bench_restricted_sumset_routes, bench_mod_rotation_engine, bench_ap_detection);
criterion_main!(benches);
