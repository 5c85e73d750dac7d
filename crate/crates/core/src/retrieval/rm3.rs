//! RM3 pseudo-relevance feedback.
//!
//! A relevance model is estimated from the top BM25 documents:
//! `P(t|R) ∝ Σ_d P(t|d) · score(d)` with `P(t|d) = tf/dl` and feedback
//! scores normalized to sum one. The top `fb_terms` terms are kept,
//! renormalized, and interpolated with the normalized original query:
//! `λ·original + (1−λ)·relevance`.

use std::collections::BTreeMap;

use super::bm25::bm25_rank;
use super::index::InvertedIndex;
use super::{Bm25Params, Rm3Params};

/// Expands a weighted query. Returns the normalized original query
/// unchanged when λ = 1, when `fb_terms` is zero, or when no document
/// matches the query. Output weights are non-negative and sum to one.
pub fn rm3_expand(
    query: &BTreeMap<String, f64>,
    index: &InvertedIndex,
    bm25: &Bm25Params,
    rm3: &Rm3Params,
) -> BTreeMap<String, f64> {
    let original = normalized(query);
    if original.is_empty() {
        return original;
    }
    let lambda = rm3.orig_weight.clamp(0.0, 1.0);
    if lambda >= 1.0 || rm3.fb_terms == 0 || rm3.fb_docs == 0 {
        return original;
    }

    let initial = bm25_rank(&original, index, bm25);
    if initial.is_empty() {
        return original;
    }
    let feedback = &initial[..initial.len().min(rm3.fb_docs)];
    let score_sum: f64 = feedback.iter().map(|(_, s)| s).sum();
    if score_sum <= 0.0 {
        return original;
    }

    let mut relevance: BTreeMap<String, f64> = BTreeMap::new();
    for (doc_id, score) in feedback {
        let dl = index.doc_len(doc_id) as f64;
        if dl == 0.0 {
            continue;
        }
        let doc_weight = score / score_sum;
        for (term, tf) in index.doc_terms(doc_id).unwrap_or(&[]) {
            *relevance.entry(term.clone()).or_insert(0.0) += (*tf as f64 / dl) * doc_weight;
        }
    }
    if relevance.is_empty() {
        return original;
    }

    // Top fb_terms by P(t|R), ties by term for determinism.
    let mut terms: Vec<(String, f64)> = relevance.into_iter().collect();
    terms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    terms.truncate(rm3.fb_terms);
    let kept_sum: f64 = terms.iter().map(|(_, w)| w).sum();

    let mut expanded: BTreeMap<String, f64> = BTreeMap::new();
    for (term, weight) in &original {
        *expanded.entry(term.clone()).or_insert(0.0) += lambda * weight;
    }
    for (term, weight) in terms {
        *expanded.entry(term).or_insert(0.0) += (1.0 - lambda) * weight / kept_sum;
    }
    expanded
}

fn normalized(query: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let sum: f64 = query.values().filter(|w| **w > 0.0).sum();
    if sum <= 0.0 {
        return BTreeMap::new();
    }
    query
        .iter()
        .filter(|(_, w)| **w > 0.0)
        .map(|(t, w)| (t.clone(), w / sum))
        .collect()
}
