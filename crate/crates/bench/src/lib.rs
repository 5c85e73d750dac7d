//! Deterministic fixture generators shared by the benchmarks.

use std::collections::BTreeMap;

use bioqa_core::data::{Corpus, Document, GoldAnswer, Question, QuestionType, Snippet};
use bioqa_core::gateway::{ConcurrencyLimits, Gateway, ModelSpec, PredictionCache, Roster};
use bioqa_core::prompting::ContextStrategy;

/// Small multiplicative congruential generator; the same seed always
/// produces the same corpus.
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self { state: seed | 1 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state >> 11
    }
}

const VOCAB: [&str; 24] = [
    "aspirin",
    "ibuprofen",
    "fever",
    "pain",
    "protein",
    "kinase",
    "receptor",
    "tumor",
    "therapy",
    "gene",
    "expression",
    "cell",
    "membrane",
    "antibody",
    "pathway",
    "mutation",
    "clinical",
    "trial",
    "dose",
    "response",
    "inflammation",
    "biomarker",
    "plasma",
    "tissue",
];

/// `n` synthetic abstracts of 20-60 vocabulary words each.
pub fn synthetic_corpus(n: usize, seed: u64) -> Corpus {
    let mut rng = Lcg::new(seed);
    (0..n)
        .map(|i| {
            let len = 20 + (rng.next_u64() % 41) as usize;
            let words: Vec<&str> = (0..len)
                .map(|_| VOCAB[(rng.next_u64() % VOCAB.len() as u64) as usize])
                .collect();
            Document {
                doc_id: format!("d{i:05}"),
                title: format!("synthetic document {i}"),
                abstract_text: words.join(" "),
            }
        })
        .collect()
}

/// `n` factoid questions with snippets, one gold entity each.
pub fn synthetic_questions(n: usize) -> Vec<Question> {
    (0..n)
        .map(|i| Question {
            id: format!("q{i:03}"),
            body: format!("synthetic factoid body {i:03}"),
            qtype: QuestionType::Factoid,
            gold: Some(GoldAnswer {
                factoid: Some(vec![vec![format!("entity {i:03}")]]),
                ..Default::default()
            }),
            gold_documents: vec![],
            gold_snippets: vec![Snippet {
                doc_id: "d00000".into(),
                text: "Benchmark snippet context.".into(),
                begin_offset: 0,
                end_offset: 26,
                score: 0.0,
            }],
            round_id: None,
        })
        .collect()
}

/// A scripted roster where model `m` answers the gold entity for
/// questions with `index % models == m` and noise elsewhere, plus a cache
/// populated for all pairs.
pub fn scripted_ensemble(models: usize, questions: &[Question]) -> (Roster, PredictionCache) {
    let specs: Vec<ModelSpec> = (0..models)
        .map(|m| {
            let table: BTreeMap<String, String> = questions
                .iter()
                .enumerate()
                .map(|(i, q)| {
                    let answer = if i % models == m {
                        format!("entity {i:03}")
                    } else {
                        format!("noise {m} {i:03}")
                    };
                    (q.body.clone(), answer)
                })
                .collect();
            ModelSpec::scripted(&format!("M{m}"), table)
        })
        .collect();
    let roster = Roster::new(specs).expect("valid roster");
    let corpus = Corpus::new();
    let gateway = Gateway::new(&roster, &corpus);
    let mut cache = PredictionCache::in_memory();
    gateway
        .populate(
            questions,
            &ContextStrategy::default(),
            &mut cache,
            ConcurrencyLimits::default(),
        )
        .expect("populate succeeds");
    (roster, cache)
}
