//! Yes/no scoring: macro-averaged F1 and plain accuracy.

use std::collections::BTreeMap;

use crate::data::{Question, QuestionType, Vote};
use crate::error::{Error, Result};

use super::{by_round, mean, MetricReport};

fn gold_yesno_questions(golds: &[Question]) -> impl Iterator<Item = (&Question, Vote)> {
    golds.iter().filter_map(|q| {
        if q.qtype != QuestionType::YesNo {
            return None;
        }
        q.gold.as_ref().and_then(|g| g.yesno).map(|v| (q, v))
    })
}

/// Macro F1 over the yes and no classes: the unweighted mean of per-class
/// F1. A class absent from the round's gold is skipped; otherwise a
/// zero-denominator F1 counts as 0. Every gold yes/no question must have
/// a prediction.
pub fn macro_f1_yesno(preds: &BTreeMap<String, Vote>, golds: &[Question]) -> Result<MetricReport> {
    let scored: Vec<(&Question, Vote)> = gold_yesno_questions(golds).collect();
    for (q, _) in &scored {
        if !preds.contains_key(&q.id) {
            return Err(Error::Staleness {
                model: "<prediction set>".into(),
                question: q.id.clone(),
            });
        }
    }
    let rounds = by_round(scored.iter().map(|(q, _)| *q));
    let gold_of: BTreeMap<&str, Vote> = scored.iter().map(|(q, v)| (q.id.as_str(), *v)).collect();

    let mut per_round = BTreeMap::new();
    for (round, questions) in rounds {
        let pairs: Vec<(Vote, Vote)> = questions
            .iter()
            .map(|q| (gold_of[q.id.as_str()], preds[&q.id]))
            .collect();
        per_round.insert(round, macro_f1(&pairs));
    }
    let mut report = MetricReport::from_rounds(Some(QuestionType::YesNo), per_round);
    report
        .components
        .insert("accuracy".into(), accuracy_value(&scored, preds));
    Ok(report)
}

/// Fraction of gold yes/no questions answered correctly, reported per
/// round like the other measures.
pub fn accuracy_yesno(preds: &BTreeMap<String, Vote>, golds: &[Question]) -> Result<MetricReport> {
    let scored: Vec<(&Question, Vote)> = gold_yesno_questions(golds).collect();
    for (q, _) in &scored {
        if !preds.contains_key(&q.id) {
            return Err(Error::Staleness {
                model: "<prediction set>".into(),
                question: q.id.clone(),
            });
        }
    }
    let gold_of: BTreeMap<&str, Vote> = scored.iter().map(|(q, v)| (q.id.as_str(), *v)).collect();
    let rounds = by_round(scored.iter().map(|(q, _)| *q));
    let mut per_round = BTreeMap::new();
    for (round, questions) in rounds {
        let correct = questions
            .iter()
            .filter(|q| preds[&q.id] == gold_of[q.id.as_str()])
            .count();
        per_round.insert(round, correct as f64 / questions.len() as f64);
    }
    Ok(MetricReport::from_rounds(
        Some(QuestionType::YesNo),
        per_round,
    ))
}

fn accuracy_value(scored: &[(&Question, Vote)], preds: &BTreeMap<String, Vote>) -> f64 {
    mean(
        scored
            .iter()
            .map(|(q, gold)| if preds[&q.id] == *gold { 1.0 } else { 0.0 }),
    )
}

fn macro_f1(pairs: &[(Vote, Vote)]) -> f64 {
    let mut class_scores = Vec::new();
    for class in [Vote::Yes, Vote::No] {
        let actual = pairs.iter().filter(|(g, _)| *g == class).count();
        if actual == 0 {
            // Class absent from gold entirely: skipped.
            continue;
        }
        let tp = pairs
            .iter()
            .filter(|(g, p)| *g == class && *p == class)
            .count() as f64;
        let fp = pairs
            .iter()
            .filter(|(g, p)| *g != class && *p == class)
            .count() as f64;
        let fn_ = pairs
            .iter()
            .filter(|(g, p)| *g == class && *p != class)
            .count() as f64;
        let denom = 2.0 * tp + fp + fn_;
        class_scores.push(if denom == 0.0 { 0.0 } else { 2.0 * tp / denom });
    }
    mean(class_scores.into_iter())
}
