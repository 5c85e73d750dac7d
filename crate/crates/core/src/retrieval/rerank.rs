//! Snippet-based re-ranking of BM25 candidates.

use crate::data::{Corpus, Question, Snippet};
use crate::error::Result;
use crate::gateway::Embedder;

use super::snippet::extract_snippet;
use super::RankedList;

/// Re-scores candidates by their best snippet's cosine to the question,
/// sorts descending (ties keep the original BM25 order), and truncates to
/// `k`, returning one snippet per surviving document. Documents with
/// empty abstracts are dropped before ranking.
pub fn rerank_by_snippet(
    question: &Question,
    candidates: &RankedList,
    corpus: &Corpus,
    embedder: &Embedder,
    k: usize,
) -> Result<(RankedList, Vec<Snippet>)> {
    let mut scored: Vec<(usize, Snippet)> = Vec::with_capacity(candidates.len());
    for (position, (doc_id, _)) in candidates.entries.iter().enumerate() {
        let Some(doc) = corpus.get(doc_id) else {
            continue;
        };
        if doc.abstract_text.is_empty() {
            continue;
        }
        let snippet = extract_snippet(question, doc, embedder)?;
        scored.push((position, snippet));
    }
    scored.sort_by(|(pos_a, a), (pos_b, b)| {
        b.score.total_cmp(&a.score).then_with(|| pos_a.cmp(pos_b))
    });
    scored.truncate(k);

    let entries = scored
        .iter()
        .map(|(_, s)| (s.doc_id.clone(), s.score))
        .collect();
    let snippets = scored.into_iter().map(|(_, s)| s).collect();
    Ok((RankedList { entries }, snippets))
}
