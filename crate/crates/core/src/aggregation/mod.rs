//! Per-question answer aggregation over a model subset: majority jury for
//! yes/no (ties go to Yes), score-summed union truncated to five for
//! factoids, plain union for lists, with optional embedding-cosine
//! deduplication.

mod dedup;
mod export;

pub use dedup::{deduplicate, DedupConfig};
pub use export::phase_b_json;

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::data::{NormalizedPhrase, Question, QuestionType, Vote};
use crate::error::{Error, Result};
use crate::gateway::{Embedder, ModelSubset, PredictionCache, Roster};
use crate::prompting::ContextStrategy;

/// Factoid answers are capped at this length after merging.
pub const MAX_FACTOIDS: usize = 5;

/// Vote counts for a yes/no jury.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JuryTally {
    pub yes_count: usize,
    pub no_count: usize,
    pub per_model: BTreeMap<String, Vote>,
}

impl JuryTally {
    pub fn from_votes(per_model: BTreeMap<String, Vote>) -> Self {
        let yes_count = per_model.values().filter(|v| **v == Vote::Yes).count();
        let no_count = per_model.len() - yes_count;
        Self {
            yes_count,
            no_count,
            per_model,
        }
    }

    /// Yes wins ties.
    pub fn verdict(&self) -> Vote {
        if self.yes_count >= self.no_count {
            Vote::Yes
        } else {
            Vote::No
        }
    }
}

/// Majority vote with ties resolved to Yes. Errors on an empty ballot:
/// answering subsets must be non-empty.
pub fn jury_vote(votes: &[Vote]) -> Result<Vote> {
    if votes.is_empty() {
        return Err(Error::Validation("jury_vote on empty vote list".into()));
    }
    let yes = votes.iter().filter(|v| **v == Vote::Yes).count();
    let no = votes.len() - yes;
    Ok(if yes >= no { Vote::Yes } else { Vote::No })
}

/// One merged factoid: summed score and the models that proposed it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedFactoid {
    pub phrase: NormalizedPhrase,
    pub total_score: f64,
    pub contributors: BTreeSet<String>,
}

/// Factoids merged across a subset, sorted by total score (ties by norm)
/// and truncated to [`MAX_FACTOIDS`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MergedFactoids {
    pub entries: Vec<MergedFactoid>,
}

/// Groups per-model ranked factoids by normalized phrase, sums scores
/// across models, sorts by total score descending (ties by norm), and
/// truncates to five. Input order fixes which raw spelling survives for
/// each group (first seen wins), so callers pass models in roster order.
pub fn merge_factoids(per_model: &[(String, Vec<(NormalizedPhrase, f64)>)]) -> MergedFactoids {
    let mut merged = merge_factoids_full(per_model);
    merged.entries.truncate(MAX_FACTOIDS);
    merged
}

/// As [`merge_factoids`] but without the top-5 truncation; used when
/// deduplication runs between merging and truncation.
pub fn merge_factoids_full(per_model: &[(String, Vec<(NormalizedPhrase, f64)>)]) -> MergedFactoids {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, MergedFactoid> = BTreeMap::new();
    for (model, factoids) in per_model {
        for (phrase, score) in factoids {
            let entry = groups.entry(phrase.norm.clone()).or_insert_with(|| {
                order.push(phrase.norm.clone());
                MergedFactoid {
                    phrase: phrase.clone(),
                    total_score: 0.0,
                    contributors: BTreeSet::new(),
                }
            });
            entry.total_score += score;
            entry.contributors.insert(model.clone());
        }
    }
    let mut entries: Vec<MergedFactoid> = order
        .into_iter()
        .map(|norm| groups.remove(&norm).expect("grouped"))
        .collect();
    entries.sort_by(|a, b| {
        b.total_score
            .total_cmp(&a.total_score)
            .then_with(|| a.phrase.norm.cmp(&b.phrase.norm))
    });
    MergedFactoids { entries }
}

/// Set union of list items over normalized phrases. Output ordered by
/// (contributing model count descending, first-seen order); the first raw
/// spelling encountered survives.
pub fn union_lists(per_model: &[(String, Vec<NormalizedPhrase>)]) -> Vec<NormalizedPhrase> {
    let mut order: Vec<String> = Vec::new();
    let mut first_raw: BTreeMap<String, NormalizedPhrase> = BTreeMap::new();
    let mut contributors: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (model, items) in per_model {
        for phrase in items {
            if !first_raw.contains_key(&phrase.norm) {
                order.push(phrase.norm.clone());
                first_raw.insert(phrase.norm.clone(), phrase.clone());
            }
            contributors
                .entry(phrase.norm.clone())
                .or_default()
                .insert(model.clone());
        }
    }
    let mut ranked: Vec<(usize, usize, String)> = order
        .iter()
        .enumerate()
        .map(|(seen, norm)| (contributors[norm].len(), seen, norm.clone()))
        .collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    ranked
        .into_iter()
        .map(|(_, _, norm)| first_raw.remove(&norm).expect("unioned"))
        .collect()
}

/// Aggregation knobs: per-type deduplication and the model whose text
/// answers summary questions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregationConfig {
    /// Factoid dedup; off by default (it does not help MRR).
    pub factoid_dedup: DedupConfig,
    /// List dedup; on by default at the submission threshold 0.7.
    pub list_dedup: DedupConfig,
    /// Roster member that generates ideal answers for summary questions.
    pub summary_model: Option<String>,
}

impl Default for AggregationConfig {
    fn default() -> Self {
        Self {
            factoid_dedup: DedupConfig {
                enabled: false,
                threshold: 0.7,
            },
            list_dedup: DedupConfig {
                enabled: true,
                threshold: 0.7,
            },
            summary_model: None,
        }
    }
}

/// A question's aggregated exact (or ideal) answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FinalAnswer {
    YesNo(Vote),
    Factoid(Vec<NormalizedPhrase>),
    List(Vec<NormalizedPhrase>),
    Ideal(String),
}

/// Aggregates the cached per-model answers of `subset` into one final
/// answer, dispatching on question type. Requires a cache entry for every
/// member; a missing entry is a staleness error naming the model and
/// question. Deterministic given (cache, config).
pub fn answer_question(
    subset: ModelSubset,
    question: &Question,
    strategy: &ContextStrategy,
    cache: &PredictionCache,
    config: &AggregationConfig,
    roster: &Roster,
    embedder: &Embedder,
) -> Result<FinalAnswer> {
    let members = roster.members(subset);
    if members.is_empty() {
        return Err(Error::Validation("empty model subset".into()));
    }

    if question.qtype == QuestionType::Summary {
        let model_name = config.summary_model.as_deref().ok_or_else(|| {
            Error::Validation("no summary model configured for summary questions".into())
        })?;
        let record = cache
            .lookup(model_name, &question.id, strategy.variant, question.qtype)
            .ok_or_else(|| Error::Staleness {
                model: model_name.to_string(),
                question: question.id.clone(),
            })?;
        let text = record.parsed.ideal_text.clone().unwrap_or_default();
        return Ok(FinalAnswer::Ideal(text));
    }

    // Per-member parsed answers, in roster order.
    let mut answers = Vec::with_capacity(members.len());
    for member in &members {
        let record = cache
            .lookup(&member.name, &question.id, strategy.variant, question.qtype)
            .ok_or_else(|| Error::Staleness {
                model: member.name.clone(),
                question: question.id.clone(),
            })?;
        answers.push((member.name.clone(), record.parsed.clone()));
    }

    match question.qtype {
        QuestionType::YesNo => {
            let votes: Vec<Vote> = answers
                .iter()
                .map(|(_, a)| a.vote.unwrap_or(Vote::No))
                .collect();
            Ok(FinalAnswer::YesNo(jury_vote(&votes)?))
        }
        QuestionType::Factoid => {
            let per_model: Vec<(String, Vec<(NormalizedPhrase, f64)>)> = answers
                .iter()
                .map(|(name, a)| (name.clone(), a.factoids.clone().unwrap_or_default()))
                .collect();
            let merged = merge_factoids_full(&per_model);
            let scored: Vec<(NormalizedPhrase, f64)> = merged
                .entries
                .into_iter()
                .map(|e| (e.phrase, e.total_score))
                .collect();
            let kept = if config.factoid_dedup.enabled {
                deduplicate(&scored, &config.factoid_dedup, embedder)?
            } else {
                scored
            };
            Ok(FinalAnswer::Factoid(
                kept.into_iter()
                    .take(MAX_FACTOIDS)
                    .map(|(p, _)| p)
                    .collect(),
            ))
        }
        QuestionType::List => {
            let per_model: Vec<(String, Vec<NormalizedPhrase>)> = answers
                .iter()
                .map(|(name, a)| (name.clone(), a.list_items.clone().unwrap_or_default()))
                .collect();
            let union = union_lists(&per_model);
            let scored: Vec<(NormalizedPhrase, f64)> =
                union.into_iter().map(|p| (p, 1.0)).collect();
            let kept = if config.list_dedup.enabled {
                deduplicate(&scored, &config.list_dedup, embedder)?
            } else {
                scored
            };
            Ok(FinalAnswer::List(
                kept.into_iter().map(|(p, _)| p).collect(),
            ))
        }
        QuestionType::Summary => unreachable!("handled above"),
    }
}
