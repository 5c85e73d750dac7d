//! Document-ranking scores: MAP and GMAP over the submitted top-10 lists.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::data::Question;
use crate::retrieval::RankedList;

use super::{by_round, mean, MetricReport};

/// Submission cap: average precision is computed over at most this many
/// returned documents, and its denominator is `min(|gold|, 10)` so a
/// perfect capped submission scores 1.
const DOC_CAP: usize = 10;

/// Smoothing added to each AP before the geometric mean.
const GMAP_EPSILON: f64 = 0.01;

fn average_precision(ranked: &RankedList, gold: &BTreeSet<&str>) -> f64 {
    if gold.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, (doc_id, _)) in ranked.entries.iter().take(DOC_CAP).enumerate() {
        if gold.contains(doc_id.as_str()) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / gold.len().min(DOC_CAP) as f64
}

/// MAP per round (primary value) with GMAP in the components
/// (`gmap` averaged, `gmap.<round>` per round). Questions without gold
/// documents are excluded; missing rankings count as empty.
pub fn map_gmap(ranked_docs: &BTreeMap<String, RankedList>, golds: &[Question]) -> MetricReport {
    let scored: Vec<&Question> = golds
        .iter()
        .filter(|q| !q.gold_documents.is_empty())
        .collect();
    let rounds = by_round(scored.into_iter());
    let empty = RankedList::default();

    let mut per_round = BTreeMap::new();
    let mut gmap_rounds: BTreeMap<String, f64> = BTreeMap::new();
    for (round, questions) in rounds {
        let aps: Vec<f64> = questions
            .iter()
            .map(|q| {
                let gold: BTreeSet<&str> = q.gold_documents.iter().map(String::as_str).collect();
                average_precision(ranked_docs.get(&q.id).unwrap_or(&empty), &gold)
            })
            .collect();
        let map = mean(aps.iter().copied());
        let gmap = (mean(aps.iter().map(|ap| (ap + GMAP_EPSILON).ln()))).exp();
        per_round.insert(round.clone(), map);
        gmap_rounds.insert(round, gmap);
    }
    let mut report = MetricReport::from_rounds(None, per_round);
    report
        .components
        .insert("gmap".into(), mean(gmap_rounds.values().copied()));
    for (round, gmap) in gmap_rounds {
        report.components.insert(format!("gmap.{round}"), gmap);
    }
    report
}
