//! Phase-A result export: per-question document URLs and snippets with
//! offsets.

use serde_json::{json, Value};

use crate::data::Snippet;

use super::RankedList;

const PUBMED_PREFIX: &str = "http://www.ncbi.nlm.nih.gov/pubmed/";

pub fn pubmed_url(doc_id: &str) -> String {
    format!("{PUBMED_PREFIX}{doc_id}")
}

/// Serializes retrieval results as Phase-A JSON:
/// `{"questions": [{"id", "documents": [urls], "snippets": [...]}]}`.
pub fn phase_a_json(results: &[(String, RankedList, Vec<Snippet>)]) -> Value {
    let questions: Vec<Value> = results
        .iter()
        .map(|(qid, ranked, snippets)| {
            json!({
                "id": qid,
                "documents": ranked
                    .entries
                    .iter()
                    .map(|(doc_id, _)| pubmed_url(doc_id))
                    .collect::<Vec<_>>(),
                "snippets": snippets
                    .iter()
                    .map(|s| {
                        json!({
                            "document": pubmed_url(&s.doc_id),
                            "text": s.text,
                            "offsetInBeginSection": s.begin_offset,
                            "offsetInEndSection": s.end_offset,
                            "beginSection": "abstract",
                            "endSection": "abstract",
                            "score": s.score,
                        })
                    })
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "questions": questions })
}
