//! Document retrieval: BM25 ranking with RM3 pseudo-relevance feedback,
//! snippet extraction by embedding similarity, and snippet-based
//! re-ranking of the candidate list.
//!
//! The pipeline per question: BM25 pass, RM3 expansion, second BM25 pass
//! with the expanded query, top-50 candidates, then re-rank by best
//! snippet cosine and keep up to 10. Ties break by ascending doc_id so
//! runs are bit-reproducible.

mod bm25;
mod export;
mod index;
mod rerank;
mod rm3;
mod snippet;

pub use bm25::{bm25_rank, bm25_score};
pub use export::phase_a_json;
pub use index::{build_index, tokenize, InvertedIndex};
pub use rerank::rerank_by_snippet;
pub use rm3::rm3_expand;
pub use snippet::{extract_snippet, split_sentences};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::Question;

/// BM25 free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

/// RM3 expansion parameters: feedback depth, expansion width, and the
/// interpolation weight of the original query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rm3Params {
    pub fb_docs: usize,
    pub fb_terms: usize,
    pub orig_weight: f64,
}

impl Default for Rm3Params {
    fn default() -> Self {
        Self {
            fb_docs: 10,
            fb_terms: 10,
            orig_weight: 0.5,
        }
    }
}

/// Documents ordered by non-increasing score with distinct doc_ids.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub entries: Vec<(String, f64)>,
}

impl RankedList {
    pub fn doc_ids(&self) -> Vec<String> {
        self.entries.iter().map(|(id, _)| id.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Turns question text into a weighted term multiset (token counts).
pub fn query_terms(text: &str) -> BTreeMap<String, f64> {
    let mut terms = BTreeMap::new();
    for token in tokenize(text) {
        *terms.entry(token).or_insert(0.0) += 1.0;
    }
    terms
}

/// Two-pass retrieval: BM25, RM3 expansion, BM25 with the expanded query,
/// then top-k by score (ties by ascending doc_id).
pub fn retrieve(
    question: &Question,
    index: &InvertedIndex,
    bm25: &Bm25Params,
    rm3: &Rm3Params,
    k: usize,
) -> RankedList {
    let original = query_terms(&question.body);
    if original.is_empty() {
        return RankedList::default();
    }
    let expanded = rm3_expand(&original, index, bm25, rm3);
    let mut ranked = bm25_rank(&expanded, index, bm25);
    ranked.truncate(k);
    RankedList { entries: ranked }
}
