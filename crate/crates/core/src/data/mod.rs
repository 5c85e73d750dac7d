//! Domain types for questions, gold answers, documents, and snippets,
//! plus loaders for the BioASQ-style question file and the JSON-Lines
//! abstract corpus.
//!
//! Everything here is immutable after load and safe to share read-only
//! across worker threads.

mod corpus;
mod normalize;
mod questions;

pub use corpus::{load_corpus, Corpus};
pub use normalize::{normalize, NormalizedPhrase};
pub use questions::load_questions;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four BioASQ question types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionType {
    YesNo,
    Factoid,
    List,
    Summary,
}

impl QuestionType {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "yesno" => Some(Self::YesNo),
            "factoid" => Some(Self::Factoid),
            "list" => Some(Self::List),
            "summary" => Some(Self::Summary),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::YesNo => "yesno",
            Self::Factoid => "factoid",
            Self::List => "list",
            Self::Summary => "summary",
        }
    }
}

impl std::fmt::Display for QuestionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A yes/no outcome, used both for gold answers and model votes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vote {
    Yes,
    No,
}

impl Vote {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Yes => "yes",
            Self::No => "no",
        }
    }
}

/// Gold answer for a question. Exactly the field matching the question's
/// type is populated; `ideal` may accompany any type.
///
/// Factoid and list golds are synonym groups: a prediction matches a group
/// if it matches any member of that group.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GoldAnswer {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yesno: Option<Vote>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factoid: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list_items: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
}

impl GoldAnswer {
    /// Synonym groups for factoid or list questions, if present.
    pub fn groups(&self, qtype: QuestionType) -> Option<&[Vec<String>]> {
        match qtype {
            QuestionType::Factoid => self.factoid.as_deref(),
            QuestionType::List => self.list_items.as_deref(),
            _ => None,
        }
    }
}

/// One BioASQ-style question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub body: String,
    pub qtype: QuestionType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<GoldAnswer>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gold_documents: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gold_snippets: Vec<Snippet>,
    /// Evaluation round this question belongs to; metrics average over rounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_id: Option<String>,
}

impl Question {
    /// Checks that the gold answer shape matches the question type.
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Validation("question with empty id".into()));
        }
        if let Some(gold) = &self.gold {
            let shape_ok = match self.qtype {
                QuestionType::YesNo => gold.factoid.is_none() && gold.list_items.is_none(),
                QuestionType::Factoid => gold.yesno.is_none() && gold.list_items.is_none(),
                QuestionType::List => gold.yesno.is_none() && gold.factoid.is_none(),
                QuestionType::Summary => {
                    gold.yesno.is_none() && gold.factoid.is_none() && gold.list_items.is_none()
                }
            };
            if !shape_ok {
                return Err(Error::Validation(format!(
                    "gold answer shape does not match type {} for question {}",
                    self.qtype, self.id
                )));
            }
            for group in gold.factoid.iter().chain(gold.list_items.iter()).flatten() {
                if group.is_empty() {
                    return Err(Error::Validation(format!(
                        "empty synonym group in gold answer of question {}",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A PubMed-style abstract record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub abstract_text: String,
}

/// A sentence span extracted from an abstract, with provenance.
///
/// Offsets are character indices into the source abstract and always
/// satisfy `abstract[begin..end] == text`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snippet {
    pub doc_id: String,
    pub text: String,
    pub begin_offset: usize,
    pub end_offset: usize,
    #[serde(default)]
    pub score: f64,
}

impl Snippet {
    /// Verifies the offset invariant against the source abstract
    /// (character-indexed, not byte-indexed).
    pub fn offsets_verify(&self, abstract_text: &str) -> bool {
        let chars: Vec<char> = abstract_text.chars().collect();
        if self.begin_offset >= self.end_offset || self.end_offset > chars.len() {
            return false;
        }
        let span: String = chars[self.begin_offset..self.end_offset].iter().collect();
        span == self.text
    }
}
