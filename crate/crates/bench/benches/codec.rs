use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use std::hint::black_box;
use vcd_bench::random_bytes;
use vcd_core::fountain::{decode, encode, gf256};
use vcd_core::CodecParams;

fn mul_add(c: &mut Criterion) {
    let src = random_bytes(1334, 1);
    let mut dst = random_bytes(1334, 2);
    let mut g = c.benchmark_group("gf256");
    g.throughput(Throughput::Bytes(src.len() as u64));
    g.bench_function("mul_add_slice 1334B", |b| {
        b.iter(|| gf256::mul_add_slice(black_box(&mut dst), black_box(&src), black_box(0x57)))
    });
    g.finish();
}

fn codec(c: &mut Criterion) {
    let file = random_bytes(400_000, 7);
    let params = CodecParams::for_file_len(file.len(), 300, 450);
    let chunks = encode(&file, &params).unwrap();
    // all-coded subset: the worst case for elimination
    let coded: Vec<_> = chunks[150..].to_vec();
    let mut g = c.benchmark_group("codec");
    g.sample_size(10);
    g.throughput(Throughput::Bytes(file.len() as u64));
    g.bench_function("encode 400kB k=300 n=450", |b| {
        b.iter(|| encode(black_box(&file), &params).unwrap())
    });
    g.bench_function("decode 300 coded chunks", |b| {
        b.iter_batched(
            || coded.clone(),
            |cs| decode(&cs, 300, file.len()).unwrap(),
            BatchSize::LargeInput,
        )
    });
    g.finish();
}

criterion_group!(benches, mul_add, codec);
criterion_main!(benches);
