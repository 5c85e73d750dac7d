//! Model roster, chat/embedding clients, scripted models for offline
//! runs, and the persistent prediction cache.
//!
//! The cache makes the subset optimizer purely offline: once every
//! (model, question, strategy) triple is populated, sweeps and answer
//! generation never touch the network.

mod cache;
mod embedder;
mod http;
mod predict;
mod scripted;

pub use cache::{PredictionCache, PredictionRecord};
pub use embedder::{cosine, Embedder, HttpEmbedder, TrigramEmbedder};
pub use http::HttpClient;
pub use predict::{ConcurrencyLimits, Gateway, PopulateStats};

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{NormalizedPhrase, QuestionType, Vote};
use crate::error::{Error, Result};
use crate::prompting::{parse_items, parse_yesno, strip_think_blocks};

/// Ceiling on roster size; the optimizer enumerates `2^N - 1` subsets.
pub const MAX_ROSTER: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Chat,
    /// Deterministic table-driven model for tests and offline fixtures.
    Scripted,
}

/// One ensemble member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    #[serde(default)]
    pub endpoint_url: String,
    #[serde(default)]
    pub model_id: String,
    #[serde(default = "default_context_tokens")]
    pub max_context_tokens: usize,
    #[serde(default = "default_timeout_secs")]
    pub request_timeout_secs: u64,
    #[serde(default)]
    pub kind: ModelKind,
    /// Response table for scripted models: the longest key contained in
    /// the prompt selects the response.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script: Option<BTreeMap<String, String>>,
}

fn default_context_tokens() -> usize {
    8192
}

fn default_timeout_secs() -> u64 {
    120
}

impl ModelSpec {
    /// A scripted model answering from a fixed table.
    pub fn scripted(name: &str, table: BTreeMap<String, String>) -> Self {
        Self {
            name: name.to_string(),
            endpoint_url: String::new(),
            model_id: String::new(),
            max_context_tokens: default_context_tokens(),
            request_timeout_secs: default_timeout_secs(),
            kind: ModelKind::Scripted,
            script: Some(table),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RosterFile {
    models: Vec<ModelSpec>,
}

/// The registered ensemble, in canonical member order.
#[derive(Debug, Clone)]
pub struct Roster {
    models: Vec<ModelSpec>,
}

impl Roster {
    pub fn new(models: Vec<ModelSpec>) -> Result<Self> {
        if models.is_empty() || models.len() > MAX_ROSTER {
            return Err(Error::Validation(format!(
                "roster must have between 1 and {MAX_ROSTER} members, got {}",
                models.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &models {
            if !seen.insert(m.name.clone()) {
                return Err(Error::Validation(format!(
                    "duplicate roster name {}",
                    m.name
                )));
            }
        }
        Ok(Self { models })
    }

    /// Loads a roster file: `{"models": [...]}`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let raw: RosterFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            offset: 0,
            detail: e.to_string(),
        })?;
        Self::new(raw.models)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = RosterFile {
            models: self.models.clone(),
        };
        let text = serde_json::to_string_pretty(&file).expect("roster serializes");
        fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// The default 13-member roster of open-weight chat models, pointed at
    /// a local OpenAI-compatible server. Endpoints and keys are
    /// overridable via `QA_ENDPOINT_<NAME>` / `QA_API_KEY_<NAME>`.
    pub fn default_table() -> Self {
        let entries: [(&str, &str); 13] = [
            ("Reflection", "reflection:latest"),
            ("L3.1", "llama3.1:70b"),
            ("L3.3", "llama3.3:70b"),
            ("Mixtral", "mixtral:8x7b"),
            ("Qwen14", "qwen3:14b"),
            ("Qwen30", "qwen3:30b-a3b"),
            ("Qwen32", "qwen3:32b"),
            ("Yi", "yi:34b"),
            ("Smaug", "smaug:72b"),
            ("DSQ8", "deepseek-r1-distill-llama-70b"),
            ("Phi3", "phi3:medium"),
            ("Phi4", "phi4:14b"),
            ("Aya", "aya:35b"),
        ];
        let models = entries
            .iter()
            .map(|(name, model_id)| ModelSpec {
                name: (*name).to_string(),
                endpoint_url: "http://localhost:11434/v1/chat/completions".to_string(),
                model_id: (*model_id).to_string(),
                max_context_tokens: default_context_tokens(),
                request_timeout_secs: default_timeout_secs(),
                kind: ModelKind::Chat,
                script: None,
            })
            .collect();
        Self::new(models).expect("default roster is valid")
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModelSpec> {
        self.models.iter()
    }

    pub fn get(&self, index: usize) -> Option<&ModelSpec> {
        self.models.get(index)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.models.iter().position(|m| m.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.models.iter().map(|m| m.name.as_str()).collect()
    }

    /// The full-roster subset (all bits set).
    pub fn full_subset(&self) -> ModelSubset {
        ModelSubset::from_mask(((1u64 << self.len()) - 1) as u32)
    }

    /// Members selected by a subset, in roster order.
    pub fn members(&self, subset: ModelSubset) -> Vec<&ModelSpec> {
        (0..self.len())
            .filter(|i| subset.contains(*i))
            .filter_map(|i| self.get(i))
            .collect()
    }

    /// Builds a subset from member names.
    pub fn subset_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ModelSubset> {
        let mut mask = 0u32;
        for name in names {
            let idx = self.index_of(name.as_ref()).ok_or_else(|| {
                Error::Validation(format!("unknown roster member {}", name.as_ref()))
            })?;
            mask |= 1 << idx;
        }
        if mask == 0 {
            return Err(Error::Validation("empty model subset".into()));
        }
        Ok(ModelSubset::from_mask(mask))
    }
}

/// A subset of the roster as a bitmask over member indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModelSubset {
    bits: u32,
}

impl ModelSubset {
    pub fn from_mask(bits: u32) -> Self {
        Self { bits }
    }

    pub fn mask(self) -> u32 {
        self.bits
    }

    pub fn size(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.bits & (1 << index) != 0
    }

    pub fn without(self, index: usize) -> Self {
        Self {
            bits: self.bits & !(1 << index),
        }
    }

    /// Member indices in ascending (roster) order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..32usize).filter(move |i| bits & (1 << i) != 0)
    }

    /// Member names in roster order.
    pub fn member_names(self, roster: &Roster) -> Vec<String> {
        roster
            .members(self)
            .iter()
            .map(|m| m.name.clone())
            .collect()
    }
}

/// One model's parsed answer to one question. Exactly the field matching
/// the question type is populated.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelAnswer {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vote: Option<Vote>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factoids: Option<Vec<(NormalizedPhrase, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list_items: Option<Vec<NormalizedPhrase>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_text: Option<String>,
    pub parse_ok: bool,
}

impl ModelAnswer {
    /// Parses a raw completion according to the question type. This is the
    /// only path from raw text to a structured answer, so cached records
    /// can always be re-derived from their raw_response.
    pub fn parse(qtype: QuestionType, raw: &str) -> Self {
        match qtype {
            QuestionType::YesNo => {
                let (vote, parse_ok) = parse_yesno(raw);
                Self {
                    vote: Some(vote),
                    parse_ok,
                    ..Self::default()
                }
            }
            QuestionType::Factoid => Self {
                factoids: Some(parse_items(raw, true)),
                parse_ok: true,
                ..Self::default()
            },
            QuestionType::List => Self {
                list_items: Some(
                    parse_items(raw, false)
                        .into_iter()
                        .map(|(p, _)| p)
                        .collect(),
                ),
                parse_ok: true,
                ..Self::default()
            },
            QuestionType::Summary => {
                let text = strip_think_blocks(raw).trim().to_string();
                let parse_ok = !text.is_empty();
                Self {
                    ideal_text: Some(text),
                    parse_ok,
                    ..Self::default()
                }
            }
        }
    }
}
