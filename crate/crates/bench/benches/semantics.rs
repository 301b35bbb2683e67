use asyncpi::checker::{run_suite, Budgets, Criterion as Check, GeneratorConfig};
use asyncpi::{reduct_candidates, struct_eq_s, EncodingScheme, Encoder};
use asyncpi_bench::sample_terms;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

fn encoding(c: &mut Criterion) {
    let terms = sample_terms();
    for scheme in EncodingScheme::ALL {
        let enc = Encoder::from(scheme);
        c.bench_function(&format!("encode/{scheme}"), |b| {
            b.iter(|| terms.iter().map(|t| enc.encode(black_box(t)).size()).sum::<usize>())
        });
    }
}

fn reduction(c: &mut Criterion) {
    let terms = sample_terms();
    c.bench_function("reduct_candidates", |b| {
        b.iter(|| terms.iter().map(|t| reduct_candidates(black_box(t), 1).len()).sum::<usize>())
    });
    let encoded: Vec<_> = terms.iter().map(|t| Encoder::from(EncodingScheme::Boudol).encode(t)).collect();
    c.bench_function("struct_eq_s/self", |b| {
        b.iter(|| encoded.iter().filter(|t| struct_eq_s(black_box(t), t)).count())
    });
}

fn suite(c: &mut Criterion) {
    let cfg = GeneratorConfig::exhaustive(3, &["x", "y"]);
    let encoders = [Encoder::from(EncodingScheme::Boudol), Encoder::from(EncodingScheme::HondaTokoro)];
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("exhaustive-3", |b| {
        b.iter(|| run_suite(&cfg, &encoders, &Check::ALL, &Budgets::default()).unwrap().len())
    });
    group.finish();
}

criterion_group!(benches, encoding, reduction, suite);
criterion_main!(benches);
