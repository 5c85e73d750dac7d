//! Append-only JSON-Lines prediction cache.
//!
//! One record per line keyed by (model, question, strategy, qtype,
//! prompt_hash). Later records supersede earlier ones on replay, so a
//! repopulated cache file merges cleanly across machines.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::QuestionType;
use crate::error::{Error, Result};
use crate::prompting::StrategyKind;

use super::ModelAnswer;

/// A cached model prediction. `parsed` is always re-derivable from
/// `raw_response` via `ModelAnswer::parse`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub model_name: String,
    pub question_id: String,
    pub strategy: StrategyKind,
    pub qtype: QuestionType,
    pub prompt_hash: u64,
    pub raw_response: String,
    pub parsed: ModelAnswer,
    pub timestamp: u64,
}

type LookupKey = (String, String, StrategyKind, QuestionType);

/// In-memory snapshot of the cache plus an append-only writer. Lookups by
/// (model, question, strategy, qtype) return the most recent record.
#[derive(Debug)]
pub struct PredictionCache {
    path: Option<PathBuf>,
    map: BTreeMap<LookupKey, PredictionRecord>,
}

impl PredictionCache {
    /// Cache without a backing file, for tests and one-shot runs.
    pub fn in_memory() -> Self {
        Self {
            path: None,
            map: BTreeMap::new(),
        }
    }

    /// Opens (creating if absent) a JSON-Lines cache file and loads a
    /// consistent snapshot.
    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = Self {
            path: Some(path.to_path_buf()),
            map: BTreeMap::new(),
        };
        if path.exists() {
            let file = File::open(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            for (lineno, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: PredictionRecord =
                    serde_json::from_str(&line).map_err(|e| Error::Parse {
                        path: path.display().to_string(),
                        offset: 0,
                        detail: format!("cache line {}: {}", lineno + 1, e),
                    })?;
                cache.map.insert(Self::key_of(&record), record);
            }
        }
        Ok(cache)
    }

    fn key_of(record: &PredictionRecord) -> LookupKey {
        (
            record.model_name.clone(),
            record.question_id.clone(),
            record.strategy,
            record.qtype,
        )
    }

    /// Most recent record for (model, question, strategy, qtype).
    pub fn lookup(
        &self,
        model_name: &str,
        question_id: &str,
        strategy: StrategyKind,
        qtype: QuestionType,
    ) -> Option<&PredictionRecord> {
        self.map.get(&(
            model_name.to_string(),
            question_id.to_string(),
            strategy,
            qtype,
        ))
    }

    /// True when a record exists for the exact prompt content.
    pub fn contains_exact(
        &self,
        model_name: &str,
        question_id: &str,
        strategy: StrategyKind,
        qtype: QuestionType,
        prompt_hash: u64,
    ) -> bool {
        self.lookup(model_name, question_id, strategy, qtype)
            .is_some_and(|r| r.prompt_hash == prompt_hash)
    }

    /// Inserts a record, appending it to the backing file when present.
    pub fn insert(&mut self, record: PredictionRecord) -> Result<()> {
        if let Some(path) = &self.path {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                    path: parent.display().to_string(),
                    source,
                })?;
            }
            let line = serde_json::to_string(&record).expect("record serializes");
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            writeln!(file, "{line}").map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        self.map.insert(Self::key_of(&record), record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
