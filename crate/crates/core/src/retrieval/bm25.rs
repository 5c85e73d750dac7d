//! Robertson BM25 with a positive IDF variant:
//! `IDF(t) = ln((N - df + 0.5) / (df + 0.5) + 1)`.

use std::collections::BTreeMap;
use std::collections::HashMap;

use super::index::InvertedIndex;
use super::Bm25Params;

fn idf(index: &InvertedIndex, term: &str) -> f64 {
    let n = index.doc_count() as f64;
    let df = index.document_frequency(term) as f64;
    ((n - df + 0.5) / (df + 0.5) + 1.0).ln()
}

/// BM25 score of one document for a weighted query. Terms absent from the
/// document contribute zero; the score is additive over query terms.
pub fn bm25_score(
    query: &BTreeMap<String, f64>,
    doc_id: &str,
    index: &InvertedIndex,
    params: &Bm25Params,
) -> f64 {
    let avgdl = index.avg_doc_len();
    let dl = index.doc_len(doc_id) as f64;
    query
        .iter()
        .map(|(term, weight)| {
            let tf = index.term_frequency(term, doc_id) as f64;
            if tf == 0.0 {
                return 0.0;
            }
            weight * idf(index, term) * term_factor(tf, dl, avgdl, params)
        })
        .sum()
}

fn term_factor(tf: f64, dl: f64, avgdl: f64, params: &Bm25Params) -> f64 {
    let length_norm = if avgdl > 0.0 {
        1.0 - params.b + params.b * dl / avgdl
    } else {
        1.0
    };
    tf * (params.k1 + 1.0) / (tf + params.k1 * length_norm)
}

/// Scores every document containing at least one query term. Sorted by
/// descending score, ties by ascending doc_id.
pub fn bm25_rank(
    query: &BTreeMap<String, f64>,
    index: &InvertedIndex,
    params: &Bm25Params,
) -> Vec<(String, f64)> {
    let avgdl = index.avg_doc_len();
    let mut scores: HashMap<String, f64> = HashMap::new();
    for (term, weight) in query {
        let Some(postings) = index.postings(term) else {
            continue;
        };
        let term_idf = idf(index, term);
        for (doc_id, tf) in postings {
            let dl = index.doc_len(doc_id) as f64;
            let contribution = weight * term_idf * term_factor(*tf as f64, dl, avgdl, params);
            *scores.entry(doc_id.clone()).or_insert(0.0) += contribution;
        }
    }
    let mut ranked: Vec<(String, f64)> = scores.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}
