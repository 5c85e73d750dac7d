//! Factoid scoring: mean reciprocal rank and lenient accuracy, both over
//! the top five predictions.

use std::collections::BTreeMap;

use crate::data::{NormalizedPhrase, Question, QuestionType};

use super::{by_round, matches_group, mean, MetricReport};

/// Predictions considered per question.
const TOP_K: usize = 5;

fn gold_factoids(golds: &[Question]) -> impl Iterator<Item = (&Question, &[Vec<String>])> {
    golds.iter().filter_map(|q| {
        if q.qtype != QuestionType::Factoid {
            return None;
        }
        q.gold
            .as_ref()
            .and_then(|g| g.factoid.as_deref())
            .map(|groups| (q, groups))
    })
}

/// 1-based rank of the first prediction matching any synonym group, within
/// the top five.
fn first_match_rank(
    preds: Option<&Vec<NormalizedPhrase>>,
    groups: &[Vec<String>],
) -> Option<usize> {
    let preds = preds?;
    preds.iter().take(TOP_K).enumerate().find_map(|(i, p)| {
        groups
            .iter()
            .any(|g| matches_group(&p.norm, g))
            .then_some(i + 1)
    })
}

/// Mean over questions of `1/rank` of the first correct prediction, zero
/// when none of the top five match. Questions without predictions
/// contribute zero.
pub fn mrr(preds: &BTreeMap<String, Vec<NormalizedPhrase>>, golds: &[Question]) -> MetricReport {
    let scored: Vec<(&Question, &[Vec<String>])> = gold_factoids(golds).collect();
    let groups_of: BTreeMap<&str, &[Vec<String>]> =
        scored.iter().map(|(q, g)| (q.id.as_str(), *g)).collect();
    let rounds = by_round(scored.iter().map(|(q, _)| *q));
    let mut per_round = BTreeMap::new();
    for (round, questions) in rounds {
        let value = mean(questions.iter().map(|q| {
            match first_match_rank(preds.get(&q.id), groups_of[q.id.as_str()]) {
                Some(rank) => 1.0 / rank as f64,
                None => 0.0,
            }
        }));
        per_round.insert(round, value);
    }
    MetricReport::from_rounds(Some(QuestionType::Factoid), per_round)
}

/// Fraction of questions with any correct prediction in the top five.
pub fn lenient_accuracy(
    preds: &BTreeMap<String, Vec<NormalizedPhrase>>,
    golds: &[Question],
) -> MetricReport {
    let scored: Vec<(&Question, &[Vec<String>])> = gold_factoids(golds).collect();
    let groups_of: BTreeMap<&str, &[Vec<String>]> =
        scored.iter().map(|(q, g)| (q.id.as_str(), *g)).collect();
    let rounds = by_round(scored.iter().map(|(q, _)| *q));
    let mut per_round = BTreeMap::new();
    for (round, questions) in rounds {
        let value = mean(questions.iter().map(|q| {
            if first_match_rank(preds.get(&q.id), groups_of[q.id.as_str()]).is_some() {
                1.0
            } else {
                0.0
            }
        }));
        per_round.insert(round, value);
    }
    MetricReport::from_rounds(Some(QuestionType::Factoid), per_round)
}
