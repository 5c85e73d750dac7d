//! Context construction for the three prompting strategies.

use crate::data::{Corpus, Question};
use crate::error::{Error, Result};

use super::{ContextStrategy, StrategyKind};

/// Builds the context string for a question under a strategy.
///
/// * `Snippets`: the question's snippet texts joined by a single blank.
/// * `Abstracts`: the first `doc_limit` resolvable abstracts of the
///   question's documents, formatted `text = <Abstract 1>, <Abstract 2>, ...`.
/// * `AbstractsExtended`: as `Abstracts`, with `extra_docs` appended after
///   the originals (duplicate ids dropped) before the limit is applied.
///
/// Fails with an empty-context error when no snippet or abstract is
/// available.
pub fn build_context(
    question: &Question,
    strategy: &ContextStrategy,
    corpus: &Corpus,
    extra_docs: Option<&[String]>,
) -> Result<String> {
    let context = match strategy.variant {
        StrategyKind::Snippets => {
            let texts: Vec<&str> = question
                .gold_snippets
                .iter()
                .map(|s| s.text.as_str())
                .filter(|t| !t.is_empty())
                .collect();
            texts.join(" ")
        }
        StrategyKind::Abstracts => abstracts_context(
            question,
            corpus,
            &question.gold_documents,
            strategy.doc_limit,
        ),
        StrategyKind::AbstractsExtended => {
            let mut ids: Vec<String> = question.gold_documents.clone();
            for extra in extra_docs.unwrap_or(&[]) {
                if !ids.iter().any(|id| id == extra) {
                    ids.push(extra.clone());
                }
            }
            abstracts_context(question, corpus, &ids, strategy.doc_limit)
        }
    };
    if context.is_empty() {
        return Err(Error::EmptyContext {
            question: question.id.clone(),
            detail: format!("strategy {} produced no text", strategy.variant),
        });
    }
    Ok(context)
}

fn abstracts_context(
    _question: &Question,
    corpus: &Corpus,
    doc_ids: &[String],
    doc_limit: usize,
) -> String {
    let texts: Vec<&str> = doc_ids
        .iter()
        .filter_map(|id| corpus.get(id))
        .map(|d| d.abstract_text.as_str())
        .filter(|t| !t.is_empty())
        .take(doc_limit)
        .collect();
    if texts.is_empty() {
        return String::new();
    }
    format!("text = {}", texts.join(", "))
}
