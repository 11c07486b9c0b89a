use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use procred_bench::random_corpus;
use procred_core::fixtures::{infix_example_nfa, shared_infix, word_automaton};
use procred_core::oracle::align_alphabets;
use procred_core::{equivalent_exact, reduce, SearchConfig, SelfProduct};

fn infix(c: &mut Criterion) {
    let a = infix_example_nfa().lift();
    c.bench_function("reduce/infix", |b| b.iter(|| reduce(black_box(&a), &SearchConfig::default())));
}

fn depth_limit(c: &mut Criterion) {
    let a = word_automaton(100).lift();
    let mut group = c.benchmark_group("reduce/word100");
    group.sample_size(10);
    for d in [1, 2, 10, 49] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| reduce(black_box(&a), &SearchConfig::with_depth(d)))
        });
    }
    group.finish();
}

fn infix_length(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce/shared_infix");
    for k in [4, 16, 64] {
        let a = shared_infix(k).lift();
        group.bench_with_input(BenchmarkId::from_parameter(k), &a, |b, a| {
            b.iter(|| reduce(black_box(a), &SearchConfig::default()))
        });
    }
    group.finish();
}

fn random(c: &mut Criterion) {
    let corpus = random_corpus(7, 10, 10);
    let mut group = c.benchmark_group("random10");
    group.sample_size(10);
    group.bench_function("self_product", |b| {
        b.iter(|| corpus.iter().map(|a| SelfProduct::new(black_box(a)).vertices().count()).sum::<usize>())
    });
    group.bench_function("reduce", |b| {
        b.iter(|| corpus.iter().map(|a| reduce(black_box(a), &SearchConfig::default()).map(|r| r.1.total_gain())).count())
    });
    let reduced: Vec<_> = corpus.iter().map(|a| reduce(a, &SearchConfig::default()).expect("reduce").0).collect();
    group.bench_function("verify_exact", |b| {
        b.iter(|| {
            corpus
                .iter()
                .zip(&reduced)
                .map(|(x, y)| {
                    let (x, y) = align_alphabets(x, y);
                    equivalent_exact(&x, &y, 10_000).map(|v| v.is_equal())
                })
                .count()
        })
    });
    group.finish();
}

criterion_group!(benches, infix, depth_limit, infix_length, random);
criterion_main!(benches);
