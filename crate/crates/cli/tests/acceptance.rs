//! Acceptance gate: one test per shipping criterion. Each test prints a
//! `PASS criterion N` line on success (visible with `--nocapture`), and
//! the per-test harness lines double as the pass/fail checklist.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bioqa_core::aggregation::{answer_question, AggregationConfig, DedupConfig, FinalAnswer};
use bioqa_core::data::{
    normalize, Corpus, Document, GoldAnswer, NormalizedPhrase, Question, QuestionType, Snippet,
    Vote,
};
use bioqa_core::gateway::{
    ConcurrencyLimits, Embedder, Gateway, ModelSpec, ModelSubset, PredictionCache, Roster,
};
use bioqa_core::hash::fnv1a64_str;
use bioqa_core::metrics::{
    evaluate_subset, lenient_accuracy, list_f1, macro_f1_yesno, map_gmap, mrr,
};
use bioqa_core::optimizer::{enumerate_subsets, sweep};
use bioqa_core::prompting::{render_prompt, ContextStrategy};
use bioqa_core::retrieval::{
    bm25_score, build_index, rerank_by_snippet, retrieve, rm3_expand, Bm25Params, RankedList,
    Rm3Params,
};

const TOL: f64 = 1e-9;

fn approx(actual: f64, expected: f64, what: &str) {
    assert!(
        (actual - expected).abs() < TOL,
        "{what}: {actual} != {expected}"
    );
}

// ---------------------------------------------------------------------------
// Shared fixture builders
// ---------------------------------------------------------------------------

fn snippet(text: &str) -> Snippet {
    Snippet {
        doc_id: "d".into(),
        text: text.into(),
        begin_offset: 0,
        end_offset: text.chars().count(),
        score: 0.0,
    }
}

fn question(id: &str, body: &str, qtype: QuestionType, gold: Option<GoldAnswer>) -> Question {
    Question {
        id: id.into(),
        body: body.into(),
        qtype,
        gold,
        gold_documents: vec![],
        gold_snippets: vec![snippet("Fixture evidence.")],
        round_id: None,
    }
}

fn yesno_gold(vote: Vote) -> Option<GoldAnswer> {
    Some(GoldAnswer {
        yesno: Some(vote),
        ..Default::default()
    })
}

fn groups_gold(qtype: QuestionType, groups: &[&[&str]]) -> Option<GoldAnswer> {
    let groups: Vec<Vec<String>> = groups
        .iter()
        .map(|g| g.iter().map(|s| s.to_string()).collect())
        .collect();
    let mut gold = GoldAnswer::default();
    match qtype {
        QuestionType::Factoid => gold.factoid = Some(groups),
        QuestionType::List => gold.list_items = Some(groups),
        _ => unreachable!(),
    }
    Some(gold)
}

fn phrases(items: &[&str]) -> Vec<NormalizedPhrase> {
    items.iter().map(|s| normalize(s)).collect()
}

fn pred_map(entries: &[(&str, &[&str])]) -> BTreeMap<String, Vec<NormalizedPhrase>> {
    entries
        .iter()
        .map(|(id, items)| (id.to_string(), phrases(items)))
        .collect()
}

/// Scripted roster answering by question body, with the cache populated
/// offline for the given questions.
fn scripted_fixture(
    models: &[(&str, Vec<(String, String)>)],
    questions: &[Question],
) -> (Roster, PredictionCache) {
    let roster = Roster::new(
        models
            .iter()
            .map(|(name, table)| ModelSpec::scripted(name, table.iter().cloned().collect()))
            .collect(),
    )
    .unwrap();
    let corpus = Corpus::new();
    let gateway = Gateway::new(&roster, &corpus);
    let mut cache = PredictionCache::in_memory();
    let stats = gateway
        .populate(
            questions,
            &ContextStrategy::default(),
            &mut cache,
            ConcurrencyLimits::default(),
        )
        .unwrap();
    assert!(
        stats.failures.is_empty(),
        "fixture populate failed: {:?}",
        stats.failures
    );
    (roster, cache)
}

// ---------------------------------------------------------------------------
// Criterion 1 — metric oracle suite (hand-computed values, 1e-9, < 1s)
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_metric_oracle_suite() {
    let start = Instant::now();

    // --- macro-F1: five fixtures -------------------------------------------
    let yn = |id: &str, v: Vote, round: Option<&str>| {
        let mut q = question(id, "", QuestionType::YesNo, yesno_gold(v));
        q.round_id = round.map(str::to_string);
        q
    };
    let votes = |pairs: &[(&str, Vote)]| -> BTreeMap<String, Vote> {
        pairs.iter().map(|(id, v)| (id.to_string(), *v)).collect()
    };

    let golds = vec![yn("q1", Vote::Yes, None), yn("q2", Vote::No, None)];
    approx(
        macro_f1_yesno(&votes(&[("q1", Vote::Yes), ("q2", Vote::No)]), &golds)
            .unwrap()
            .averaged,
        1.0,
        "macro-f1 perfect",
    );

    let golds = vec![
        yn("q1", Vote::Yes, None),
        yn("q2", Vote::Yes, None),
        yn("q3", Vote::No, None),
        yn("q4", Vote::No, None),
    ];
    // yes: TP=1 FP=0 FN=1 -> 2/3; no: TP=2 FP=1 FN=0 -> 4/5; macro = 11/15.
    approx(
        macro_f1_yesno(
            &votes(&[
                ("q1", Vote::Yes),
                ("q2", Vote::No),
                ("q3", Vote::No),
                ("q4", Vote::No),
            ]),
            &golds,
        )
        .unwrap()
        .averaged,
        11.0 / 15.0,
        "macro-f1 hand matrix",
    );

    let golds = vec![yn("q1", Vote::Yes, None), yn("q2", Vote::Yes, None)];
    approx(
        macro_f1_yesno(&votes(&[("q1", Vote::Yes), ("q2", Vote::Yes)]), &golds)
            .unwrap()
            .averaged,
        1.0,
        "macro-f1 all-yes skip rule",
    );
    approx(
        macro_f1_yesno(&votes(&[("q1", Vote::No), ("q2", Vote::No)]), &golds)
            .unwrap()
            .averaged,
        0.0,
        "macro-f1 all wrong single class",
    );

    let golds = vec![yn("q1", Vote::Yes, None), yn("q2", Vote::No, None)];
    approx(
        macro_f1_yesno(&votes(&[("q1", Vote::No), ("q2", Vote::Yes)]), &golds)
            .unwrap()
            .averaged,
        0.0,
        "macro-f1 fully inverted",
    );

    // Rounds average: r1 perfect, r2 one of two right.
    // r2: yes TP=1 FP=1 FN=0 -> 2/3; no TP=0 FP=0 FN=1 -> 0; macro r2 = 1/3.
    let golds = vec![
        yn("a1", Vote::Yes, Some("r1")),
        yn("a2", Vote::No, Some("r1")),
        yn("b1", Vote::Yes, Some("r2")),
        yn("b2", Vote::No, Some("r2")),
    ];
    approx(
        macro_f1_yesno(
            &votes(&[
                ("a1", Vote::Yes),
                ("a2", Vote::No),
                ("b1", Vote::Yes),
                ("b2", Vote::Yes),
            ]),
            &golds,
        )
        .unwrap()
        .averaged,
        (1.0 + 1.0 / 3.0) / 2.0,
        "macro-f1 round averaging",
    );

    // --- MRR: six fixtures ---------------------------------------------------
    let fq = |id: &str, groups: &[&[&str]]| {
        question(
            id,
            "",
            QuestionType::Factoid,
            groups_gold(QuestionType::Factoid, groups),
        )
    };
    let golds = vec![fq("q1", &[&["BRCA1"]]), fq("q2", &[&["TP53"]])];
    approx(
        mrr(
            &pred_map(&[("q1", &["brca1"]), ("q2", &["tp53", "x"])]),
            &golds,
        )
        .averaged,
        1.0,
        "mrr all rank one",
    );
    let golds = vec![fq("q1", &[&["a"]]), fq("q2", &[&["b"]])];
    approx(
        mrr(
            &pred_map(&[("q1", &["x", "a"]), ("q2", &["y", "z"])]),
            &golds,
        )
        .averaged,
        0.25,
        "mrr rank two plus miss",
    );
    let golds = vec![fq("q1", &[&["a"]])];
    approx(
        mrr(&pred_map(&[("q1", &[])]), &golds).averaged,
        0.0,
        "mrr empty preds",
    );
    approx(
        mrr(&pred_map(&[("q1", &["x1", "x2", "x3", "x4", "a"])]), &golds).averaged,
        0.2,
        "mrr rank five",
    );
    approx(
        mrr(
            &pred_map(&[("q1", &["x1", "x2", "x3", "x4", "x5", "a"])]),
            &golds,
        )
        .averaged,
        0.0,
        "mrr beyond top five",
    );
    let golds = vec![fq("q1", &[&["Diabetes Mellitus", "T2D"]])];
    approx(
        mrr(&pred_map(&[("q1", &["t2d"])]), &golds).averaged,
        1.0,
        "mrr synonym group",
    );

    // --- lenient accuracy: five fixtures -------------------------------------
    let golds = vec![fq("q1", &[&["a"]]), fq("q2", &[&["b"]])];
    approx(
        lenient_accuracy(
            &pred_map(&[("q1", &["x", "a"]), ("q2", &["y", "z"])]),
            &golds,
        )
        .averaged,
        0.5,
        "lenient half",
    );
    let golds = vec![fq("q1", &[&["a"]])];
    let preds = pred_map(&[("q1", &["x1", "x2", "x3", "x4", "a"])]);
    approx(
        lenient_accuracy(&preds, &golds).averaged,
        1.0,
        "lenient rank five",
    );
    approx(
        mrr(&preds, &golds).averaged,
        0.2,
        "lenient diverges from mrr",
    );
    approx(
        lenient_accuracy(&BTreeMap::new(), &golds).averaged,
        0.0,
        "lenient no predictions at all",
    );
    let golds = vec![
        fq("q1", &[&["a"]]),
        fq("q2", &[&["b"]]),
        fq("q3", &[&["c"]]),
    ];
    approx(
        lenient_accuracy(
            &pred_map(&[("q1", &["a"]), ("q2", &["nope"]), ("q3", &["x", "y"])]),
            &golds,
        )
        .averaged,
        1.0 / 3.0,
        "lenient one of three",
    );
    approx(
        lenient_accuracy(
            &pred_map(&[("q1", &["a"]), ("q2", &["b"]), ("q3", &["c"])]),
            &golds,
        )
        .averaged,
        1.0,
        "lenient all matched",
    );

    // --- list F1: five fixtures ----------------------------------------------
    let lq = |id: &str, groups: &[&[&str]]| {
        question(
            id,
            "",
            QuestionType::List,
            groups_gold(QuestionType::List, groups),
        )
    };
    let golds = vec![lq("q1", &[&["a"], &["b"]])];
    approx(
        list_f1(&pred_map(&[("q1", &["a", "b"])]), &golds).averaged,
        1.0,
        "list exact",
    );
    approx(
        list_f1(&pred_map(&[("q1", &["a", "c"])]), &golds).averaged,
        0.5,
        "list half",
    );
    approx(
        list_f1(&pred_map(&[("q1", &[])]), &golds).averaged,
        0.0,
        "list empty preds",
    );
    // Duplicates cannot double count: P = 2/3, R = 1, F1 = 4/5.
    approx(
        list_f1(&pred_map(&[("q1", &["a", "a", "b"])]), &golds).averaged,
        0.8,
        "list duplicate prediction",
    );
    // P = 1, R = 1/2, F1 = 2/3.
    approx(
        list_f1(&pred_map(&[("q1", &["a"])]), &golds).averaged,
        2.0 / 3.0,
        "list partial recall",
    );
    let golds = vec![lq(
        "q1",
        &[&["Heart Attack", "myocardial infarction"], &["stroke"]],
    )];
    approx(
        list_f1(
            &pred_map(&[("q1", &["Myocardial Infarction.", "stroke"])]),
            &golds,
        )
        .averaged,
        1.0,
        "list synonym groups via normalization",
    );

    // --- MAP/GMAP: five fixtures ----------------------------------------------
    let dq = |id: &str, gold_docs: &[&str]| Question {
        id: id.into(),
        body: String::new(),
        qtype: QuestionType::Summary,
        gold: None,
        gold_documents: gold_docs.iter().map(|s| s.to_string()).collect(),
        gold_snippets: vec![],
        round_id: None,
    };
    let ranking = |ids: &[&str]| RankedList {
        entries: ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.to_string(), 1.0 - 0.01 * i as f64))
            .collect(),
    };
    let rank_map = |entries: &[(&str, &[&str])]| -> BTreeMap<String, RankedList> {
        entries
            .iter()
            .map(|(id, docs)| (id.to_string(), ranking(docs)))
            .collect()
    };

    let golds = vec![dq("q1", &["d1"])];
    let report = map_gmap(&rank_map(&[("q1", &["d1", "x"])]), &golds);
    approx(report.averaged, 1.0, "map single gold rank one");
    approx(report.components["gmap"], 1.01, "gmap single gold rank one");

    let golds = vec![dq("q1", &["d1", "d3"])];
    approx(
        map_gmap(&rank_map(&[("q1", &["d1", "x", "d3"])]), &golds).averaged,
        5.0 / 6.0,
        "map ranks one and three",
    );

    let golds = vec![dq("q1", &["d1"]), dq("q2", &["d9"])];
    let report = map_gmap(&rank_map(&[("q1", &["d1"]), ("q2", &["x"])]), &golds);
    approx(report.averaged, 0.5, "map zero-ap question");
    approx(
        report.components["gmap"],
        (1.01f64 * 0.01).sqrt(),
        "gmap dragged toward epsilon",
    );

    let gold_ids: Vec<String> = (0..12).map(|i| format!("d{i}")).collect();
    let gold_refs: Vec<&str> = gold_ids.iter().map(String::as_str).collect();
    let golds = vec![dq("q1", &gold_refs)];
    let top10: Vec<&str> = gold_refs[..10].to_vec();
    approx(
        map_gmap(&rank_map(&[("q1", &top10)]), &golds).averaged,
        1.0,
        "map perfect capped submission",
    );

    let golds = vec![dq("q1", &["d1"]), dq("q2", &["d1", "d3"])];
    let report = map_gmap(
        &rank_map(&[("q1", &["d1"]), ("q2", &["d1", "x", "d3"])]),
        &golds,
    );
    approx(report.averaged, (1.0 + 5.0 / 6.0) / 2.0, "map mean of two");
    approx(
        report.components["gmap"],
        (1.01f64 * (5.0 / 6.0 + 0.01)).sqrt(),
        "gmap mean of two",
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "metric oracles took {elapsed:?}"
    );
    println!("PASS criterion 1: metric oracle suite ({elapsed:?})");
}

// ---------------------------------------------------------------------------
// Criterion 2 — jury semantics over 10,000 random vote vectors
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_jury_semantics() {
    use bioqa_core::aggregation::jury_vote;

    let mut state = 0x00C0FFEEu64 | 1;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        state >> 33
    };

    for case in 0..10_000u32 {
        let len = (next() % 15 + 1) as usize;
        let ballot: Vec<Vote> = (0..len)
            .map(|_| if next() % 2 == 0 { Vote::Yes } else { Vote::No })
            .collect();
        let verdict = jury_vote(&ballot).unwrap();

        // The exact tie rule: yes iff yes_count >= no_count.
        let yes = ballot.iter().filter(|v| **v == Vote::Yes).count();
        let expected = if yes >= ballot.len() - yes {
            Vote::Yes
        } else {
            Vote::No
        };
        assert_eq!(verdict, expected, "case {case}: tie rule violated");

        // Permutation invariance under a deterministic shuffle.
        let mut shuffled = ballot.clone();
        for i in (1..shuffled.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        assert_eq!(
            jury_vote(&shuffled).unwrap(),
            verdict,
            "case {case}: permutation"
        );

        // Monotonicity: flipping one No to Yes never flips Yes to No.
        if verdict == Vote::Yes {
            if let Some(pos) = ballot.iter().position(|v| *v == Vote::No) {
                let mut flipped = ballot.clone();
                flipped[pos] = Vote::Yes;
                assert_eq!(
                    jury_vote(&flipped).unwrap(),
                    Vote::Yes,
                    "case {case}: monotonicity"
                );
            }
        }
    }

    // Exact ties resolve to Yes at every even size.
    for half in 1..8usize {
        let mut ballot = vec![Vote::Yes; half];
        ballot.extend(vec![Vote::No; half]);
        assert_eq!(
            jury_vote(&ballot).unwrap(),
            Vote::Yes,
            "tie of {half}:{half}"
        );
    }

    println!("PASS criterion 2: jury semantics (10,000 cases, zero violations)");
}

// ---------------------------------------------------------------------------
// Criterion 3 — subset-sweep exactness
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_subset_sweep_exactness() {
    // n = 13 self-check without evaluation.
    assert_eq!(enumerate_subsets(13).unwrap().count(), 8191);

    for n in 1..=4usize {
        let masks: Vec<u32> = enumerate_subsets(n)
            .unwrap()
            .map(ModelSubset::mask)
            .collect();
        let expected: Vec<u32> = (1..(1u32 << n)).collect();
        assert_eq!(masks, expected, "n={n} enumeration");
    }

    // Parallel sweep equals a naive sequential oracle subset-for-subset.
    let questions: Vec<Question> = (0..6)
        .map(|i| {
            let gold = if i % 2 == 0 { Vote::Yes } else { Vote::No };
            question(
                &format!("q{i}"),
                &format!("body {i}"),
                QuestionType::YesNo,
                yesno_gold(gold),
            )
        })
        .collect();
    let models: Vec<(&str, Vec<(String, String)>)> = (0..4)
        .map(|m| {
            let name: &str = ["A", "B", "C", "D"][m];
            // Model m answers Yes when (question index + model index) is even.
            let table: Vec<(String, String)> = (0..6)
                .map(|i| {
                    let answer = if (i + m) % 2 == 0 { "Yes" } else { "No" };
                    (format!("body {i}"), answer.to_string())
                })
                .collect();
            (name, table)
        })
        .collect();
    let (roster, cache) = scripted_fixture(&models, &questions);
    let strategy = ContextStrategy::default();
    let config = AggregationConfig::default();
    let embedder = Embedder::default();

    let parallel = sweep(
        &roster,
        &cache,
        &questions,
        QuestionType::YesNo,
        &strategy,
        &config,
        &embedder,
        4,
    )
    .unwrap();
    assert_eq!(parallel.per_subset.len(), 15);

    for subset in enumerate_subsets(roster.len()).unwrap() {
        let oracle = evaluate_subset(
            subset,
            &cache,
            &questions,
            QuestionType::YesNo,
            &strategy,
            &config,
            &roster,
            &embedder,
        )
        .unwrap();
        assert_eq!(
            parallel.per_subset[&subset.mask()],
            oracle,
            "subset {:#x} differs from sequential oracle",
            subset.mask()
        );
    }

    println!(
        "PASS criterion 3: subset-sweep exactness (2^n - 1 enumeration, parallel == sequential)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 4 — complementarity reproduction for factoids
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_factoid_complementarity() {
    let start = Instant::now();
    const QUESTIONS: usize = 30;

    // 30 questions in three disjoint thirds; two models know each third and
    // answer its questions correctly at rank 1, emitting model-specific
    // noise elsewhere. Noise sorts lexicographically before the correct
    // answers so low-consensus unions pay a rank penalty.
    let questions: Vec<Question> = (0..QUESTIONS)
        .map(|i| {
            question(
                &format!("q{i:02}"),
                &format!("factoid body {i:02}"),
                QuestionType::Factoid,
                groups_gold(QuestionType::Factoid, &[&[&format!("zz entity {i:02}")]]),
            )
        })
        .collect();
    let models: Vec<(&str, Vec<(String, String)>)> = (0..6)
        .map(|m| {
            let name: &str = ["M0", "M1", "M2", "M3", "M4", "M5"][m];
            let third = m / 2;
            let table: Vec<(String, String)> = (0..QUESTIONS)
                .map(|i| {
                    let answer = if i / 10 == third {
                        format!("zz entity {i:02}")
                    } else {
                        format!("aa noise {m} {i:02}")
                    };
                    (format!("factoid body {i:02}"), answer)
                })
                .collect();
            (name, table)
        })
        .collect();
    let (roster, cache) = scripted_fixture(&models, &questions);

    let result = sweep(
        &roster,
        &cache,
        &questions,
        QuestionType::Factoid,
        &ContextStrategy::default(),
        &AggregationConfig::default(),
        &Embedder::default(),
        4,
    )
    .unwrap();

    // Best subset is the full six-model union.
    assert_eq!(
        result.best,
        roster.full_subset(),
        "best subset should be the full union"
    );
    approx(
        result.per_subset[&result.best.mask()].averaged,
        1.0,
        "full union MRR",
    );

    // Every union of >= 4 models strictly beats every singleton's MRR.
    let mut worst_big = f64::INFINITY;
    let mut best_single = f64::NEG_INFINITY;
    for (mask, report) in &result.per_subset {
        let size = ModelSubset::from_mask(*mask).size();
        if size >= 4 {
            worst_big = worst_big.min(report.averaged);
        }
        if size == 1 {
            best_single = best_single.max(report.averaged);
        }
    }
    assert!(
        worst_big > best_single,
        "union>=4 worst {worst_big} must strictly beat best singleton {best_single}"
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(5),
        "complementarity fixture took {elapsed:?}"
    );
    println!(
        "PASS criterion 4: factoid complementarity (worst >=4-union {worst_big:.4} > best singleton {best_single:.4}, {elapsed:?})"
    );
}

// ---------------------------------------------------------------------------
// Criterion 5 — list over-union degradation
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_list_over_union_degradation() {
    const QUESTIONS: usize = 2;
    // Six gold items per question. Models 0-2 contribute disjoint correct
    // pairs; models 3-5 repeat them. Every model adds 4 unique spurious
    // items, so unions beyond three models only add noise.
    let questions: Vec<Question> = (0..QUESTIONS)
        .map(|qi| {
            let gold: Vec<Vec<String>> = (0..6)
                .map(|c| vec![format!("gold item {qi} {c}")])
                .collect();
            question(
                &format!("q{qi}"),
                &format!("list body {qi}"),
                QuestionType::List,
                Some(GoldAnswer {
                    list_items: Some(gold),
                    ..Default::default()
                }),
            )
        })
        .collect();
    let models: Vec<(&str, Vec<(String, String)>)> = (0..6)
        .map(|m| {
            let name: &str = ["M0", "M1", "M2", "M3", "M4", "M5"][m];
            let pair = m % 3;
            let table: Vec<(String, String)> = (0..QUESTIONS)
                .map(|qi| {
                    let mut items = vec![
                        format!("gold item {qi} {}", pair * 2),
                        format!("gold item {qi} {}", pair * 2 + 1),
                    ];
                    items.extend((0..4).map(|s| format!("bogus {m} {qi} {s}")));
                    (format!("list body {qi}"), items.join(", "))
                })
                .collect();
            (name, table)
        })
        .collect();
    let (roster, cache) = scripted_fixture(&models, &questions);

    // Dedup off: this criterion isolates the union-size effect.
    let config = AggregationConfig {
        list_dedup: DedupConfig {
            enabled: false,
            threshold: 0.7,
        },
        ..Default::default()
    };
    let result = sweep(
        &roster,
        &cache,
        &questions,
        QuestionType::List,
        &ContextStrategy::default(),
        &config,
        &Embedder::default(),
        4,
    )
    .unwrap();

    let full = result.per_subset[&roster.full_subset().mask()].averaged;
    let best_three = result
        .per_subset
        .iter()
        .filter(|(mask, _)| ModelSubset::from_mask(**mask).size() == 3)
        .map(|(_, r)| r.averaged)
        .fold(f64::NEG_INFINITY, f64::max);
    let best_single = result
        .per_subset
        .iter()
        .filter(|(mask, _)| ModelSubset::from_mask(**mask).size() == 1)
        .map(|(_, r)| r.averaged)
        .fold(f64::NEG_INFINITY, f64::max);

    // Full union: 6 correct + 24 spurious -> P = 1/5, R = 1, F1 = 1/3.
    approx(full, 1.0 / 3.0, "full union F1");
    // Complementary three: 6 correct + 12 spurious -> P = 1/3, R = 1, F1 = 1/2.
    approx(best_three, 0.5, "best three-model F1");
    assert!(
        full < best_three,
        "full union {full} must fall below best three {best_three}"
    );
    assert!(
        best_three > best_single,
        "three-model best should beat singletons"
    );

    println!(
        "PASS criterion 5: list over-union degradation (full {full:.4} < best-3 {best_three:.4})"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6 — dedup sweep shape for lists
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_dedup_sweep_shape() {
    // Two list questions; model A emits the correct items plus a spurious
    // phrase, model B paraphrases that spurious phrase. Verified trigram
    // cosines: paraphrase pairs ~0.95-0.99, every other pair <= 0.51.
    let questions = vec![
        question(
            "q0",
            "list body 0",
            QuestionType::List,
            groups_gold(QuestionType::List, &[&["streptomycin"], &["rifampicin"]]),
        ),
        question(
            "q1",
            "list body 1",
            QuestionType::List,
            groups_gold(QuestionType::List, &[&["isoniazid"], &["ethambutol"]]),
        ),
    ];
    let models: Vec<(&str, Vec<(String, String)>)> = vec![
        (
            "A",
            vec![
                (
                    "list body 0".into(),
                    "streptomycin, rifampicin, chronic liver disease".into(),
                ),
                (
                    "list body 1".into(),
                    "isoniazid, ethambutol, renal failure".into(),
                ),
            ],
        ),
        (
            "B",
            vec![
                ("list body 0".into(), "chronic liver diseases".into()),
                ("list body 1".into(), "renal failures".into()),
            ],
        ),
    ];
    let (roster, cache) = scripted_fixture(&models, &questions);
    let embedder = Embedder::default();
    let strategy = ContextStrategy::default();
    let subset = roster.full_subset();

    let f1_at = |dedup: DedupConfig| -> f64 {
        let config = AggregationConfig {
            list_dedup: dedup,
            ..Default::default()
        };
        evaluate_subset(
            subset,
            &cache,
            &questions,
            QuestionType::List,
            &strategy,
            &config,
            &roster,
            &embedder,
        )
        .unwrap()
        .averaged
    };

    let no_dedup = f1_at(DedupConfig {
        enabled: false,
        threshold: 0.7,
    });
    // Union per question: 2 correct + 2 spurious -> P = 1/2, R = 1, F1 = 2/3.
    approx(no_dedup, 2.0 / 3.0, "no-dedup baseline");

    let thresholds = [0.5, 0.6, 0.7, 0.76, 0.8, 0.9, 1.0, 1.01];
    let mut curve = Vec::new();
    for t in thresholds {
        curve.push((
            t,
            f1_at(DedupConfig {
                enabled: true,
                threshold: t,
            }),
        ));
    }

    // tau = 1.01 reproduces the no-dedup score exactly (bitwise, not approx).
    let at_disable = curve.iter().find(|(t, _)| *t == 1.01).unwrap().1;
    assert_eq!(
        at_disable, no_dedup,
        "tau=1.01 must equal the no-dedup score exactly"
    );

    // Some interior threshold strictly improves on no dedup: the paraphrase
    // duplicate is pruned, lifting precision.
    let best_interior = curve
        .iter()
        .filter(|(t, _)| *t > 0.0 && *t <= 1.0)
        .map(|(_, f)| *f)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        best_interior > no_dedup,
        "interior best {best_interior} must exceed no-dedup {no_dedup}"
    );
    // At tau = 0.8 exactly the paraphrases are pruned: P = 2/3, R = 1.
    let at_08 = curve.iter().find(|(t, _)| *t == 0.8).unwrap().1;
    approx(at_08, 0.8, "F1 at tau = 0.8");

    println!(
        "PASS criterion 6: dedup sweep shape (no-dedup {no_dedup:.4}, best interior {best_interior:.4}, tau=1.01 exact)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 7 — retrieval correctness
// ---------------------------------------------------------------------------

/// Independent BM25 oracle: recomputes scores from raw token lists with
/// the textbook formula, no inverted index involved.
fn oracle_bm25(
    docs: &[(&str, &str)],
    query: &[(&str, f64)],
    doc_id: &str,
    params: &Bm25Params,
) -> f64 {
    let tokenize = |text: &str| -> Vec<String> {
        text.split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(str::to_lowercase)
            .collect()
    };
    let n = docs.len() as f64;
    let lens: BTreeMap<&str, f64> = docs
        .iter()
        .map(|(id, text)| (*id, tokenize(text).len() as f64))
        .collect();
    let avgdl: f64 = lens.values().sum::<f64>() / n;
    let tokens = tokenize(docs.iter().find(|(id, _)| *id == doc_id).unwrap().1);
    query
        .iter()
        .map(|(term, weight)| {
            let tf = tokens.iter().filter(|t| t == term).count() as f64;
            if tf == 0.0 {
                return 0.0;
            }
            let df = docs
                .iter()
                .filter(|(_, text)| tokenize(text).iter().any(|t| t == term))
                .count() as f64;
            let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
            let norm = 1.0 - params.b + params.b * lens[doc_id] / avgdl;
            weight * idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm)
        })
        .sum()
}

#[test]
fn criterion_7_retrieval_correctness() {
    let docs: [(&str, &str); 5] = [
        ("d1", "aspirin reduces fever in adults"),
        ("d2", "aspirin and ibuprofen reduce inflammation"),
        ("d3", "paracetamol treats fever and mild pain"),
        ("d4", "ibuprofen treats pain"),
        ("d5", "placebo shows no effect on fever or pain"),
    ];
    let corpus: Corpus = docs
        .iter()
        .map(|(id, text)| Document {
            doc_id: (*id).to_string(),
            title: String::new(),
            abstract_text: (*text).to_string(),
        })
        .collect();
    let index = build_index(&corpus);
    let params = Bm25Params::default();
    let query: BTreeMap<String, f64> =
        [("aspirin".to_string(), 1.0), ("fever".to_string(), 1.0)].into();

    // Spreadsheet-evaluated expectations for query {aspirin:1, fever:1},
    // k1 = 1.2, b = 0.75, N = 5, avgdl = 5.4, df(aspirin) = 2, df(fever) = 3.
    let frozen: [(&str, f64); 5] = [
        ("d1", 1.458667276776793),
        ("d2", 0.902827135396209),
        ("d3", 0.515561870266049),
        ("d4", 0.0),
        ("d5", 0.450300874029840),
    ];
    let oracle_query: [(&str, f64); 2] = [("aspirin", 1.0), ("fever", 1.0)];
    for (doc_id, expected) in frozen {
        let got = bm25_score(&query, doc_id, &index, &params);
        approx(got, expected, &format!("bm25 {doc_id}"));
        let oracle = oracle_bm25(&docs, &oracle_query, doc_id, &params);
        approx(got, oracle, &format!("bm25 {doc_id} vs oracle"));
    }

    // RM3 no-op cases.
    let rm3_lambda_one = Rm3Params {
        orig_weight: 1.0,
        ..Rm3Params::default()
    };
    let normalized: BTreeMap<String, f64> =
        [("aspirin".to_string(), 0.5), ("fever".to_string(), 0.5)].into();
    assert_eq!(
        rm3_expand(&query, &index, &params, &rm3_lambda_one),
        normalized,
        "lambda = 1 must be a no-op"
    );
    let rm3_zero_terms = Rm3Params {
        fb_terms: 0,
        ..Rm3Params::default()
    };
    assert_eq!(
        rm3_expand(&query, &index, &params, &rm3_zero_terms),
        normalized,
        "fb_terms = 0 must be a no-op"
    );

    // Two-pass retrieval order matches the spreadsheet evaluation: the
    // expansion pulls in d4 via ibuprofen/pain, ranked last.
    let q = question("q", "aspirin fever", QuestionType::Summary, None);
    let ranked = retrieve(&q, &index, &params, &Rm3Params::default(), 50);
    let order: Vec<&str> = ranked.entries.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(order, vec!["d1", "d2", "d3", "d5", "d4"]);
    let frozen_second_pass: [(&str, f64); 5] = [
        ("d1", 0.715859251097253),
        ("d2", 0.472114598951406),
        ("d3", 0.224102396529677),
        ("d5", 0.160060710466175),
        ("d4", 0.052509340072060),
    ];
    for ((doc_id, expected), (got_id, got)) in frozen_second_pass.iter().zip(ranked.entries.iter())
    {
        assert_eq!(doc_id, got_id);
        approx(*got, *expected, &format!("two-pass {doc_id}"));
    }

    // Snippet re-ranking: <= 10 docs and offsets substring-verify.
    let many: Corpus = (0..14)
        .map(|i| Document {
            doc_id: format!("m{i:02}"),
            title: String::new(),
            abstract_text: format!("Sentence about topic {i}. Aspirin fever detail {i}."),
        })
        .collect();
    let many_index = build_index(&many);
    let candidates = retrieve(&q, &many_index, &params, &Rm3Params::default(), 50);
    assert!(candidates.len() > 10);
    let (final_ranked, snippets) =
        rerank_by_snippet(&q, &candidates, &many, &Embedder::default(), 10).unwrap();
    assert_eq!(final_ranked.len(), 10);
    assert_eq!(snippets.len(), 10);
    for snip in &snippets {
        let doc = many.get(&snip.doc_id).unwrap();
        assert!(
            snip.offsets_verify(&doc.abstract_text),
            "offsets of {} do not substring-verify",
            snip.doc_id
        );
    }

    println!(
        "PASS criterion 7: retrieval correctness (BM25 to 1e-9, RM3 no-ops, rerank cap + offsets)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 8 — end-to-end determinism through the CLI binary
// ---------------------------------------------------------------------------

fn run_cli(dir: &Path, args: &[&str]) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_bioqa"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&output.stdout).to_string();
    let stderr = String::from_utf8_lossy(&output.stderr).to_string();
    (
        output.status.code().unwrap_or(-1),
        format!("{stdout}\n{stderr}"),
    )
}

#[test]
fn criterion_8_end_to_end_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    // Corpus: six abstracts with shared vocabulary.
    let corpus_lines: Vec<String> = (0..6)
        .map(|i| {
            serde_json::json!({
                "doc_id": format!("10{i}"),
                "title": format!("Study {i} on aspirin"),
                "abstract_text": format!(
                    "Aspirin study number {i}. Fever outcomes improved in group {i}."
                ),
            })
            .to_string()
        })
        .collect();
    std::fs::write(root.join("corpus.jsonl"), corpus_lines.join("\n")).unwrap();

    // Two rounds of questions covering all four types.
    let questions_round = |round: usize| {
        serde_json::json!({
            "questions": [
                {
                    "id": format!("r{round}_yn"),
                    "body": format!("Does aspirin reduce fever {round}?"),
                    "type": "yesno",
                    "exact_answer": "yes",
                    "snippets": [{"document": "100", "text": "Aspirin reduces fever.",
                                  "offsetInBeginSection": 0, "offsetInEndSection": 22}]
                },
                {
                    "id": format!("r{round}_f"),
                    "body": format!("Which drug lowers fever {round}?"),
                    "type": "factoid",
                    "exact_answer": [["aspirin"]],
                    "snippets": [{"document": "101", "text": "Aspirin lowers fever.",
                                  "offsetInBeginSection": 0, "offsetInEndSection": 21}]
                },
                {
                    "id": format!("r{round}_l"),
                    "body": format!("Which drugs treat pain {round}?"),
                    "type": "list",
                    "exact_answer": [["aspirin"], ["ibuprofen"]],
                    "snippets": [{"document": "102", "text": "Aspirin and ibuprofen treat pain.",
                                  "offsetInBeginSection": 0, "offsetInEndSection": 33}]
                },
                {
                    "id": format!("r{round}_s"),
                    "body": format!("Summarize aspirin use {round}."),
                    "type": "summary",
                    "snippets": [{"document": "103", "text": "Aspirin is widely used.",
                                  "offsetInBeginSection": 0, "offsetInEndSection": 23}]
                }
            ]
        })
    };
    for round in 1..=2 {
        std::fs::write(
            root.join(format!("questions_r{round}.json")),
            serde_json::to_string_pretty(&questions_round(round)).unwrap(),
        )
        .unwrap();
    }

    // Scripted roster keyed by question bodies.
    let script_for = |style: usize| {
        let mut table = serde_json::Map::new();
        for round in 1..=2 {
            table.insert(
                format!("Does aspirin reduce fever {round}?"),
                serde_json::json!(if style == 2 { "No" } else { "Yes" }),
            );
            table.insert(
                format!("Which drug lowers fever {round}?"),
                serde_json::json!(match style {
                    0 => "aspirin, paracetamol",
                    1 => "paracetamol, aspirin",
                    _ => "ibuprofen",
                }),
            );
            table.insert(
                format!("Which drugs treat pain {round}?"),
                serde_json::json!(match style {
                    0 => "aspirin, ibuprofen",
                    1 => "ibuprofen, naproxen",
                    _ => "EMPTY",
                }),
            );
            table.insert(
                format!("Summarize aspirin use {round}."),
                serde_json::json!("Aspirin is used for fever and pain."),
            );
        }
        serde_json::Value::Object(table)
    };
    let roster = serde_json::json!({
        "models": [
            {"name": "S1", "kind": "scripted", "script": script_for(0)},
            {"name": "S2", "kind": "scripted", "script": script_for(1)},
            {"name": "S3", "kind": "scripted", "script": script_for(2)}
        ]
    });
    std::fs::write(
        root.join("roster.json"),
        serde_json::to_string_pretty(&roster).unwrap(),
    )
    .unwrap();

    let config = serde_json::json!({
        "roster": "roster.json",
        "corpus": "corpus.jsonl",
        "questions": [
            {"path": "questions_r1.json", "round": "r1"},
            {"path": "questions_r2.json", "round": "r2"}
        ],
        "strategy": "snippets",
        "summary_model": "S1",
        "out_dir": "out",
        "workers": 3
    });
    std::fs::write(
        root.join("config.json"),
        serde_json::to_string_pretty(&config).unwrap(),
    )
    .unwrap();

    let pipeline = |expect_misses: bool| -> BTreeMap<String, Vec<u8>> {
        let (code, _) = run_cli(root, &["ingest", "--config", "config.json"]);
        assert_eq!(code, 0, "ingest");
        let (code, _) = run_cli(root, &["retrieve", "--config", "config.json"]);
        assert_eq!(code, 0, "retrieve");
        let (code, out) = run_cli(root, &["populate-cache", "--config", "config.json"]);
        assert_eq!(code, 0, "populate: {out}");
        if expect_misses {
            assert!(!out.contains(" 0 misses"), "first run should miss: {out}");
        } else {
            assert!(
                out.contains(" 0 misses"),
                "second run must be network-silent: {out}"
            );
        }
        for qtype in ["yesno", "factoid", "list"] {
            let (code, out) = run_cli(
                root,
                &["sweep", "--config", "config.json", "--qtype", qtype],
            );
            assert_eq!(code, 0, "sweep {qtype}: {out}");
        }
        let (code, out) = run_cli(
            root,
            &["answer", "--config", "config.json", "--subset", "S1,S2,S3"],
        );
        assert_eq!(code, 0, "answer: {out}");
        let (code, out) = run_cli(
            root,
            &["eval", "--config", "config.json", "--subset", "S1,S2,S3"],
        );
        assert_eq!(code, 0, "eval: {out}");

        let mut artifacts = BTreeMap::new();
        for name in [
            "out/phase_a.json",
            "out/sweep_yesno.csv",
            "out/sweep_factoid.csv",
            "out/sweep_list.csv",
            "out/sweep_yesno.json",
            "out/sweep_factoid.json",
            "out/sweep_list.json",
            "out/scatter_yesno.csv",
            "out/scatter_factoid.csv",
            "out/scatter_list.csv",
            "out/top_subsets_yesno.json",
            "out/top_subsets_factoid.json",
            "out/top_subsets_list.json",
            "out/answers.json",
            "out/eval.json",
            "out/cache.jsonl",
        ] {
            artifacts.insert(name.to_string(), std::fs::read(root.join(name)).unwrap());
        }
        artifacts
    };

    let first = pipeline(true);
    let second = pipeline(false);
    for (name, bytes) in &first {
        assert_eq!(
            bytes,
            second.get(name).unwrap(),
            "artifact {name} differs between runs"
        );
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(30),
        "pipeline took {elapsed:?}"
    );
    println!("PASS criterion 8: end-to-end determinism (byte-identical, network-silent replay, {elapsed:?})");
}

// ---------------------------------------------------------------------------
// Criterion 9 — prompt fidelity
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_prompt_fidelity() {
    let yesno = render_prompt(QuestionType::YesNo, "CTX", "Q?");
    assert!(yesno.contains("answer the QUESTION only with"));
    assert!(yesno.contains("\"Yes\" or \"No\""));

    let list = render_prompt(QuestionType::List, "CTX", "Q?");
    assert!(list.contains("return the word EMPTY"));
    assert!(list.contains("separated by commas"));

    let factoid = render_prompt(QuestionType::Factoid, "CTX", "Q?");
    assert!(factoid.contains("return the word EMPTY"));
    assert!(factoid.contains("ordered by decreasing confidence"));

    let summary = render_prompt(QuestionType::Summary, "CTX", "Q?");
    assert!(summary.contains("single paragraph sized text"));

    // Checksums over the raw templates (placeholders unsubstituted).
    use bioqa_core::prompting::{
        FACTOID_TEMPLATE, LIST_TEMPLATE, SUMMARY_TEMPLATE, YESNO_TEMPLATE,
    };
    assert_eq!(fnv1a64_str(YESNO_TEMPLATE), 0xbefd7f6a14083f66);
    assert_eq!(fnv1a64_str(LIST_TEMPLATE), 0x119db9a52ece0b5c);
    assert_eq!(fnv1a64_str(FACTOID_TEMPLATE), 0x111b926fcba1576f);
    assert_eq!(fnv1a64_str(SUMMARY_TEMPLATE), 0xca9cc06525c0c7a6);

    println!("PASS criterion 9: prompt fidelity (verbatim instructions + pinned checksums)");
}

// ---------------------------------------------------------------------------
// Cross-module spot check used by several criteria
// ---------------------------------------------------------------------------

#[test]
fn jury_tie_flows_through_answer_question() {
    let questions = vec![question(
        "q1",
        "tie body",
        QuestionType::YesNo,
        yesno_gold(Vote::Yes),
    )];
    let models: Vec<(&str, Vec<(String, String)>)> = vec![
        ("M1", vec![("tie body".into(), "Yes".into())]),
        ("M2", vec![("tie body".into(), "No".into())]),
    ];
    let (roster, cache) = scripted_fixture(&models, &questions);
    let answer = answer_question(
        roster.full_subset(),
        &questions[0],
        &ContextStrategy::default(),
        &cache,
        &AggregationConfig::default(),
        &roster,
        &Embedder::default(),
    )
    .unwrap();
    assert_eq!(answer, FinalAnswer::YesNo(Vote::Yes));
}
