//! Scoring a model subset against gold questions through the aggregation
//! pipeline.

use std::collections::BTreeMap;

use crate::aggregation::{answer_question, AggregationConfig, FinalAnswer};
use crate::data::{NormalizedPhrase, Question, QuestionType, Vote};
use crate::error::{Error, Result};
use crate::gateway::{Embedder, ModelSubset, PredictionCache, Roster};
use crate::prompting::ContextStrategy;

use super::{list_f1, macro_f1_yesno, mrr, MetricReport};

/// Aggregates the subset's answer for every gold question of `qtype`,
/// keyed by question id. Missing cache entries surface as staleness
/// errors naming the model and question.
#[allow(clippy::too_many_arguments)]
pub fn collect_answers(
    subset: ModelSubset,
    cache: &PredictionCache,
    golds: &[Question],
    qtype: QuestionType,
    strategy: &ContextStrategy,
    config: &AggregationConfig,
    roster: &Roster,
    embedder: &Embedder,
) -> Result<BTreeMap<String, FinalAnswer>> {
    golds
        .iter()
        .filter(|q| q.qtype == qtype)
        .map(|q| {
            answer_question(subset, q, strategy, cache, config, roster, embedder)
                .map(|a| (q.id.clone(), a))
        })
        .collect()
}

/// Extracts the yes/no votes from collected answers.
pub fn yesno_predictions(answers: &BTreeMap<String, FinalAnswer>) -> BTreeMap<String, Vote> {
    answers
        .iter()
        .filter_map(|(qid, a)| match a {
            FinalAnswer::YesNo(vote) => Some((qid.clone(), *vote)),
            _ => None,
        })
        .collect()
}

/// Extracts the phrase lists from collected factoid or list answers.
pub fn phrase_predictions(
    answers: &BTreeMap<String, FinalAnswer>,
) -> BTreeMap<String, Vec<NormalizedPhrase>> {
    answers
        .iter()
        .filter_map(|(qid, a)| match a {
            FinalAnswer::Factoid(phrases) | FinalAnswer::List(phrases) => {
                Some((qid.clone(), phrases.clone()))
            }
            _ => None,
        })
        .collect()
}

/// Aggregates the subset's cached answers per question and scores them
/// with the type's official measure: macro-F1 for yes/no, MRR for
/// factoid, mean F1 for list. Missing cache entries surface as staleness
/// errors naming the model and question.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_subset(
    subset: ModelSubset,
    cache: &PredictionCache,
    golds: &[Question],
    qtype: QuestionType,
    strategy: &ContextStrategy,
    config: &AggregationConfig,
    roster: &Roster,
    embedder: &Embedder,
) -> Result<MetricReport> {
    let answers = collect_answers(
        subset, cache, golds, qtype, strategy, config, roster, embedder,
    )?;
    match qtype {
        QuestionType::YesNo => macro_f1_yesno(&yesno_predictions(&answers), golds),
        QuestionType::Factoid => Ok(mrr(&phrase_predictions(&answers), golds)),
        QuestionType::List => Ok(list_f1(&phrase_predictions(&answers), golds)),
        QuestionType::Summary => Err(Error::Validation(
            "summary questions are judged manually; no automatic metric".into(),
        )),
    }
}
