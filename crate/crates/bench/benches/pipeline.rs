//! Benchmarks for the hot paths: indexing, two-pass retrieval, factoid
//! merging, deduplication, and exhaustive subset sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bioqa_bench::{scripted_ensemble, synthetic_corpus, synthetic_questions};
use bioqa_core::aggregation::{deduplicate, merge_factoids, AggregationConfig, DedupConfig};
use bioqa_core::data::{normalize, NormalizedPhrase, Question, QuestionType};
use bioqa_core::gateway::Embedder;
use bioqa_core::optimizer::sweep;
use bioqa_core::prompting::ContextStrategy;
use bioqa_core::retrieval::{build_index, retrieve, Bm25Params, Rm3Params};

fn bench_indexing(c: &mut Criterion) {
    let mut group = c.benchmark_group("index");
    for size in [500usize, 2000] {
        let corpus = synthetic_corpus(size, 7);
        group.bench_with_input(BenchmarkId::new("build", size), &corpus, |b, corpus| {
            b.iter(|| build_index(black_box(corpus)));
        });
    }
    group.finish();
}

fn bench_retrieval(c: &mut Criterion) {
    let corpus = synthetic_corpus(2000, 7);
    let index = build_index(&corpus);
    let question = Question {
        id: "q".into(),
        body: "aspirin fever inflammation response".into(),
        qtype: QuestionType::Summary,
        gold: None,
        gold_documents: vec![],
        gold_snippets: vec![],
        round_id: None,
    };
    let bm25 = Bm25Params::default();
    let rm3 = Rm3Params::default();
    c.bench_function("retrieve/two_pass_top50", |b| {
        b.iter(|| retrieve(black_box(&question), &index, &bm25, &rm3, 50));
    });
}

fn bench_aggregation(c: &mut Criterion) {
    let per_model: Vec<(String, Vec<(NormalizedPhrase, f64)>)> = (0..13)
        .map(|m| {
            let ranked: Vec<(NormalizedPhrase, f64)> = (0..8)
                .map(|i| {
                    (
                        normalize(&format!("phrase {} {}", (m + i) % 20, i)),
                        1.0 / (i as f64 + 1.0),
                    )
                })
                .collect();
            (format!("M{m}"), ranked)
        })
        .collect();
    c.bench_function("aggregate/merge_factoids_13_models", |b| {
        b.iter(|| merge_factoids(black_box(&per_model)));
    });

    let phrases: Vec<(NormalizedPhrase, f64)> = (0..40)
        .map(|i| (normalize(&format!("candidate phrase {i}")), 1.0))
        .collect();
    let config = DedupConfig {
        enabled: true,
        threshold: 0.7,
    };
    let embedder = Embedder::default();
    c.bench_function("aggregate/dedup_40_phrases", |b| {
        b.iter(|| deduplicate(black_box(&phrases), &config, &embedder).unwrap());
    });
}

fn bench_sweep(c: &mut Criterion) {
    let questions = synthetic_questions(20);
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for models in [6usize, 8] {
        let (roster, cache) = scripted_ensemble(models, &questions);
        group.bench_with_input(
            BenchmarkId::new("factoid_exhaustive", models),
            &models,
            |b, _| {
                b.iter(|| {
                    sweep(
                        black_box(&roster),
                        &cache,
                        &questions,
                        QuestionType::Factoid,
                        &ContextStrategy::default(),
                        &AggregationConfig::default(),
                        &Embedder::default(),
                        4,
                    )
                    .unwrap()
                });
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_indexing,
    bench_retrieval,
    bench_aggregation,
    bench_sweep
);
criterion_main!(benches);
