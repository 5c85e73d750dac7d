//! List scoring: per-question precision, recall, and F1, averaged over
//! questions and rounds.
//!
//! Matching is one-to-one: predictions are matched greedily in order to
//! the first still-unmatched gold group they hit, so one prediction can
//! never satisfy two groups and duplicate predictions cannot double
//! count.

use std::collections::BTreeMap;

use crate::data::{NormalizedPhrase, Question, QuestionType};

use super::{by_round, matches_group, mean, MetricReport};

fn gold_lists(golds: &[Question]) -> impl Iterator<Item = (&Question, &[Vec<String>])> {
    golds.iter().filter_map(|q| {
        if q.qtype != QuestionType::List {
            return None;
        }
        q.gold
            .as_ref()
            .and_then(|g| g.list_items.as_deref())
            .map(|groups| (q, groups))
    })
}

/// Greedy one-to-one assignment of predictions to gold groups; returns the
/// number of matched pairs.
pub(crate) fn greedy_matches(preds: &[NormalizedPhrase], groups: &[Vec<String>]) -> usize {
    let mut taken = vec![false; groups.len()];
    let mut matched = 0usize;
    for pred in preds {
        for (gi, group) in groups.iter().enumerate() {
            if !taken[gi] && matches_group(&pred.norm, group) {
                taken[gi] = true;
                matched += 1;
                break;
            }
        }
    }
    matched
}

fn prf(preds: &[NormalizedPhrase], groups: &[Vec<String>]) -> (f64, f64, f64) {
    let matched = greedy_matches(preds, groups) as f64;
    let precision = if preds.is_empty() {
        0.0
    } else {
        matched / preds.len() as f64
    };
    let recall = if groups.is_empty() {
        0.0
    } else {
        matched / groups.len() as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (precision, recall, f1)
}

/// Mean F1 over list questions with mean precision/recall in the
/// components. Questions without predictions score zero.
pub fn list_f1(
    preds: &BTreeMap<String, Vec<NormalizedPhrase>>,
    golds: &[Question],
) -> MetricReport {
    let scored: Vec<(&Question, &[Vec<String>])> = gold_lists(golds).collect();
    let groups_of: BTreeMap<&str, &[Vec<String>]> =
        scored.iter().map(|(q, g)| (q.id.as_str(), *g)).collect();
    let rounds = by_round(scored.iter().map(|(q, _)| *q));
    let empty: Vec<NormalizedPhrase> = Vec::new();

    let mut per_round = BTreeMap::new();
    let mut round_precisions = Vec::new();
    let mut round_recalls = Vec::new();
    for (round, questions) in rounds {
        let triples: Vec<(f64, f64, f64)> = questions
            .iter()
            .map(|q| prf(preds.get(&q.id).unwrap_or(&empty), groups_of[q.id.as_str()]))
            .collect();
        round_precisions.push(mean(triples.iter().map(|t| t.0)));
        round_recalls.push(mean(triples.iter().map(|t| t.1)));
        per_round.insert(round, mean(triples.iter().map(|t| t.2)));
    }
    let mut report = MetricReport::from_rounds(Some(QuestionType::List), per_round);
    report
        .components
        .insert("precision".into(), mean(round_precisions.into_iter()));
    report
        .components
        .insert("recall".into(), mean(round_recalls.into_iter()));
    report
}
