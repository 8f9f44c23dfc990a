use criterion::{black_box, criterion_group, criterion_main, Criterion, Throughput};

use ahnn_core::cipher::{decrypt, default_secret_key, encrypt, keystream, GrayImage};
use ahnn_core::metrics::{bytes_to_bits, nist_subset, SplitMix64};

fn test_image(rows: usize, cols: usize) -> GrayImage {
    let mut rng = SplitMix64::new(99);
    let pixels = (0..rows * cols).map(|_| rng.next_u64() as u8).collect();
    GrayImage::new(rows, cols, pixels).unwrap()
}

fn bench_keystream(c: &mut Criterion) {
    let key = default_secret_key();
    let mut g = c.benchmark_group("keystream");
    g.throughput(Throughput::Bytes((129 * 129) as u64));
    g.bench_function("bundle_129", |b| {
        b.iter(|| keystream(black_box(&key), 582, 129, 96).unwrap())
    });
    g.finish();
}

fn bench_cipher(c: &mut Criterion) {
    let key = default_secret_key();
    let img = test_image(96, 129);
    let mut g = c.benchmark_group("cipher");
    g.throughput(Throughput::Bytes((96 * 129) as u64));
    g.bench_function("encrypt_96x129", |b| {
        b.iter(|| encrypt(black_box(&img), &key, 582).unwrap())
    });
    let env = encrypt(&img, &key, 582).unwrap();
    g.bench_function("decrypt_96x129", |b| {
        b.iter(|| decrypt(black_box(&env), &key, 582).unwrap())
    });
    g.finish();
}

fn bench_nist(c: &mut Criterion) {
    let mut rng = SplitMix64::new(5);
    let bytes: Vec<u8> = (0..125_000).map(|_| rng.next_u64() as u8).collect();
    let bits = bytes_to_bits(&bytes);
    c.bench_function("nist_subset_1m_bits", |b| {
        b.iter(|| nist_subset(black_box(&bits)).unwrap())
    });
}

criterion_group!(benches, bench_keystream, bench_cipher, bench_nist);
criterion_main!(benches);
