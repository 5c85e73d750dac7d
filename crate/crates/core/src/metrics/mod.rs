//! Evaluation measures: macro-F1 and accuracy for yes/no, MRR and lenient
//! accuracy for factoids, mean precision/recall/F1 for lists, MAP and
//! GMAP for document rankings, each reported per round and averaged over
//! rounds.
//!
//! Prediction-to-gold matching always goes through [`crate::data::normalize`]:
//! a prediction matches a synonym group when its normalized form equals
//! the normalized form of any group member.

mod docs;
mod evaluate;
mod factoid;
mod list;
mod yesno;

pub use docs::map_gmap;
pub use evaluate::{collect_answers, evaluate_subset, phrase_predictions, yesno_predictions};
pub use factoid::{lenient_accuracy, mrr};
pub use list::list_f1;
pub use yesno::{accuracy_yesno, macro_f1_yesno};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{Question, QuestionType};

/// Round key for questions without an explicit round id.
pub const DEFAULT_ROUND: &str = "all";

/// A metric broken down per round with its round-averaged value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qtype: Option<QuestionType>,
    pub per_round: BTreeMap<String, f64>,
    /// Arithmetic mean of the per-round values.
    pub averaged: f64,
    /// Secondary values (precision, recall, gmap, ...), round-averaged.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub components: BTreeMap<String, f64>,
}

impl MetricReport {
    pub(crate) fn from_rounds(
        qtype: Option<QuestionType>,
        per_round: BTreeMap<String, f64>,
    ) -> Self {
        let averaged = mean(per_round.values().copied());
        Self {
            qtype,
            per_round,
            averaged,
            components: BTreeMap::new(),
        }
    }
}

pub(crate) fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        sum += v;
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Groups questions by round id (questions without one share a default
/// round). Round keys are sorted, so iteration is deterministic.
pub(crate) fn by_round<'a>(
    questions: impl Iterator<Item = &'a Question>,
) -> BTreeMap<String, Vec<&'a Question>> {
    let mut rounds: BTreeMap<String, Vec<&Question>> = BTreeMap::new();
    for q in questions {
        let key = q
            .round_id
            .clone()
            .unwrap_or_else(|| DEFAULT_ROUND.to_string());
        rounds.entry(key).or_default().push(q);
    }
    rounds
}

/// True when a normalized prediction matches any synonym in the group.
pub(crate) fn matches_group(pred_norm: &str, group: &[String]) -> bool {
    group
        .iter()
        .any(|synonym| crate::data::normalize(synonym).norm == pred_norm)
}
