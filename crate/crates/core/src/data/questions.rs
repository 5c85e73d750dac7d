//! Loader for BioASQ Task-B question files.
//!
//! Layout: `{"questions": [{"id", "body", "type", "exact_answer",
//! "ideal_answer", "documents", "snippets"}, ...]}`. Unknown fields are
//! ignored; gold fields are mapped according to the question type.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::{GoldAnswer, Question, QuestionType, Snippet, Vote};
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct RawFile {
    questions: Vec<RawQuestion>,
}

#[derive(Deserialize)]
struct RawQuestion {
    id: String,
    #[serde(default)]
    body: String,
    #[serde(rename = "type")]
    qtype: String,
    #[serde(default)]
    exact_answer: Option<Value>,
    #[serde(default)]
    ideal_answer: Option<Value>,
    #[serde(default)]
    documents: Vec<String>,
    #[serde(default)]
    snippets: Vec<RawSnippet>,
    #[serde(default)]
    round: Option<String>,
}

/// Accepts both the official snippet field names and this tool's own
/// Phase-A export names.
#[derive(Deserialize)]
struct RawSnippet {
    #[serde(alias = "doc_id")]
    document: String,
    text: String,
    #[serde(alias = "begin_offset", rename = "offsetInBeginSection")]
    begin: usize,
    #[serde(alias = "end_offset", rename = "offsetInEndSection")]
    end: usize,
    #[serde(default)]
    score: f64,
}

/// Loads and validates a question file.
///
/// Errors: unreadable file, malformed JSON (reported with byte offset),
/// unknown question type or duplicate/empty ids (reported with the
/// offending question id).
pub fn load_questions(path: &Path) -> Result<Vec<Question>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_questions(&text, &path.display().to_string())
}

/// Parses question-file text; `label` names the source in errors.
pub fn parse_questions(text: &str, label: &str) -> Result<Vec<Question>> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: label.to_string(),
        offset: byte_offset(text, e.line(), e.column()),
        detail: e.to_string(),
    })?;

    let mut seen = BTreeSet::new();
    let mut questions = Vec::with_capacity(raw.questions.len());
    for rq in raw.questions {
        let qtype = QuestionType::parse(&rq.qtype).ok_or_else(|| {
            Error::Validation(format!(
                "unknown question type \"{}\" for question {}",
                rq.qtype, rq.id
            ))
        })?;
        if !seen.insert(rq.id.clone()) {
            return Err(Error::Validation(format!(
                "duplicate question id {}",
                rq.id
            )));
        }
        let gold = gold_from_raw(&rq, qtype)?;
        let question = Question {
            id: rq.id,
            body: rq.body,
            qtype,
            gold,
            gold_documents: rq.documents.iter().map(|d| doc_id_from_ref(d)).collect(),
            gold_snippets: rq
                .snippets
                .into_iter()
                .map(|s| Snippet {
                    doc_id: doc_id_from_ref(&s.document),
                    text: s.text,
                    begin_offset: s.begin,
                    end_offset: s.end,
                    score: s.score,
                })
                .collect(),
            round_id: rq.round,
        };
        question.validate()?;
        questions.push(question);
    }
    Ok(questions)
}

/// Gold documents may be bare PubMed ids or full URLs; keep the last path
/// segment either way.
fn doc_id_from_ref(doc_ref: &str) -> String {
    doc_ref
        .trim_end_matches('/')
        .rsplit('/')
        .next()
        .unwrap_or(doc_ref)
        .to_string()
}

fn gold_from_raw(rq: &RawQuestion, qtype: QuestionType) -> Result<Option<GoldAnswer>> {
    let ideal = rq.ideal_answer.as_ref().and_then(ideal_text);
    let mut gold = GoldAnswer {
        ideal,
        ..GoldAnswer::default()
    };
    match (&rq.exact_answer, qtype) {
        (Some(v), QuestionType::YesNo) => {
            let s = v
                .as_str()
                .map(str::to_lowercase)
                .unwrap_or_else(|| v.to_string());
            gold.yesno = Some(match s.trim() {
                "yes" => Vote::Yes,
                "no" => Vote::No,
                other => {
                    return Err(Error::Validation(format!(
                        "question {}: yes/no gold must be \"yes\" or \"no\", got {other:?}",
                        rq.id
                    )))
                }
            });
        }
        (Some(v), QuestionType::Factoid) => gold.factoid = Some(synonym_groups(v)),
        (Some(v), QuestionType::List) => gold.list_items = Some(synonym_groups(v)),
        _ => {}
    }
    if gold == GoldAnswer::default() {
        return Ok(None);
    }
    Ok(Some(gold))
}

/// Maps a JSON exact_answer into synonym groups: a plain string becomes a
/// single one-member group, a flat array becomes one group per string, and
/// a nested array is taken as-is.
fn synonym_groups(v: &Value) -> Vec<Vec<String>> {
    match v {
        Value::String(s) => vec![vec![s.clone()]],
        Value::Array(items) => items
            .iter()
            .filter_map(|item| match item {
                Value::String(s) => Some(vec![s.clone()]),
                Value::Array(group) => {
                    let members: Vec<String> = group
                        .iter()
                        .filter_map(|m| m.as_str().map(str::to_string))
                        .collect();
                    (!members.is_empty()).then_some(members)
                }
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// ideal_answer may be a string or an array of reference strings.
fn ideal_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items.iter().find_map(|i| i.as_str().map(str::to_string)),
        _ => None,
    }
}

/// Converts serde_json's 1-based line/column into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in text.lines().enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    offset
}
