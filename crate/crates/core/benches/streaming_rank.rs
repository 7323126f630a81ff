//! Benchmarks the streaming rank engine: sequential absorption versus the
//! chunked parallel merge (when the `parallel` feature is enabled), over
//! pseudo-random F_p row streams of increasing size.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use hscoh::linalg::rank_streaming_seq;

/// Deterministic dense-ish row stream: a cheap splitmix-style hash per entry
/// so row generation itself stays negligible next to elimination cost.
fn row(p: u64, i: usize, buf: &mut [u64]) {
    let mut x = (i as u64).wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    for c in buf.iter_mut() {
        x ^= x >> 30;
        x = x.wrapping_mul(0xbf58476d1ce4e5b9);
        x ^= x >> 27;
        *c = x % p;
    }
}

fn bench_streaming_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("streaming_rank");
    for &(p, cols, nrows) in &[
        (2u64, 64usize, 20_000usize),
        (3, 64, 20_000),
        (2, 256, 50_000),
    ] {
        let label = format!("p{p}_c{cols}_r{nrows}");
        group.throughput(Throughput::Elements(nrows as u64));
        group.bench_with_input(BenchmarkId::new("seq", &label), &(), |b, ()| {
            b.iter(|| {
                rank_streaming_seq(p, cols, nrows, |i, buf| row(p, i, buf))
                    .unwrap()
                    .rank()
            })
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", &label), &(), |b, ()| {
            b.iter(|| {
                hscoh::linalg::rank_streaming_par(p, cols, nrows, |i, buf| row(p, i, buf))
                    .unwrap()
                    .rank()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_streaming_rank);
criterion_main!(benches);
