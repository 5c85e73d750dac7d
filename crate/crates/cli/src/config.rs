//! Run configuration shared by all subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use bioqa_core::aggregation::AggregationConfig;
use bioqa_core::data::Question;
use bioqa_core::gateway::{ConcurrencyLimits, Embedder, HttpEmbedder, Roster, TrigramEmbedder};
use bioqa_core::prompting::{ContextStrategy, StrategyKind};
use bioqa_core::retrieval::{Bm25Params, Rm3Params};
use bioqa_core::{load_questions, Error, Result};

/// One questions file, optionally tagged with a round id.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuestionsEntry {
    Path(PathBuf),
    Tagged { path: PathBuf, round: String },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DedupSection {
    #[serde(default)]
    pub factoid: Option<bioqa_core::DedupConfig>,
    #[serde(default)]
    pub list: Option<bioqa_core::DedupConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmbedderConfig {
    Named(String),
    Http {
        endpoint_url: String,
        model_id: String,
        #[serde(default = "default_embed_timeout")]
        timeout_secs: u64,
    },
}

fn default_embed_timeout() -> u64 {
    60
}

impl Default for EmbedderConfig {
    fn default() -> Self {
        Self::Named("trigram".into())
    }
}

/// The configuration file (`--config`). Paths are resolved relative to
/// the config file's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub roster: Option<PathBuf>,
    pub corpus: PathBuf,
    #[serde(default)]
    pub questions: Vec<QuestionsEntry>,
    #[serde(default = "default_strategy")]
    pub strategy: String,
    #[serde(default = "default_doc_limit")]
    pub doc_limit: usize,
    #[serde(default)]
    pub dedup: DedupSection,
    #[serde(default)]
    pub summary_model: Option<String>,
    #[serde(default)]
    pub bm25: Bm25Params,
    #[serde(default)]
    pub rm3: Rm3Params,
    #[serde(default)]
    pub embedder: EmbedderConfig,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub cache: Option<PathBuf>,
    #[serde(default = "default_per_endpoint")]
    pub per_endpoint_concurrency: usize,
    #[serde(default = "default_global")]
    pub global_concurrency: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// `--rounds` override: comma-separated round ids to keep.
    #[serde(skip)]
    pub rounds_filter: Option<String>,
}

fn default_strategy() -> String {
    "snippets".into()
}

fn default_doc_limit() -> usize {
    10
}

fn default_per_endpoint() -> usize {
    4
}

fn default_global() -> usize {
    16
}

fn default_workers() -> usize {
    4
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            offset: 0,
            detail: e.to_string(),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(r) = &mut self.roster {
            resolve(r);
        }
        resolve(&mut self.corpus);
        resolve(&mut self.out_dir);
        if let Some(c) = &mut self.cache {
            resolve(c);
        }
        for entry in &mut self.questions {
            match entry {
                QuestionsEntry::Path(p) => resolve(p),
                QuestionsEntry::Tagged { path, .. } => resolve(path),
            }
        }
    }

    pub fn roster(&self) -> Result<Roster> {
        match &self.roster {
            Some(path) => Roster::load(path),
            None => Ok(Roster::default_table()),
        }
    }

    /// Loads all questions files, stamping each file's round id onto its
    /// questions (explicit per-question rounds win). Ids must be unique
    /// across files.
    pub fn load_all_questions(&self) -> Result<Vec<Question>> {
        let mut all: Vec<Question> = Vec::new();
        let mut seen = BTreeMap::new();
        for entry in &self.questions {
            let (path, round) = match entry {
                QuestionsEntry::Path(p) => (p.clone(), None),
                QuestionsEntry::Tagged { path, round } => (path.clone(), Some(round.clone())),
            };
            let mut questions = load_questions(&path)?;
            for q in &mut questions {
                if q.round_id.is_none() {
                    q.round_id = round.clone();
                }
                if let Some(earlier) = seen.insert(q.id.clone(), path.display().to_string()) {
                    return Err(Error::Validation(format!(
                        "question id {} appears in both {} and {}",
                        q.id,
                        earlier,
                        path.display()
                    )));
                }
            }
            all.extend(questions);
        }
        if let Some(rounds) = &self.rounds_filter {
            let wanted: Vec<&str> = rounds.split(',').map(str::trim).collect();
            all.retain(|q| wanted.contains(&q.round_id.as_deref().unwrap_or("all")));
        }
        Ok(all)
    }

    pub fn strategy(&self) -> Result<ContextStrategy> {
        let variant = StrategyKind::parse(&self.strategy).ok_or_else(|| {
            Error::Validation(format!(
                "unknown strategy {:?} (expected snippets, abstracts, or abstracts_extended)",
                self.strategy
            ))
        })?;
        Ok(ContextStrategy {
            variant,
            doc_limit: self.doc_limit,
        })
    }

    pub fn aggregation(&self) -> AggregationConfig {
        let mut config = AggregationConfig {
            summary_model: self.summary_model.clone(),
            ..AggregationConfig::default()
        };
        if let Some(f) = &self.dedup.factoid {
            config.factoid_dedup = *f;
        }
        if let Some(l) = &self.dedup.list {
            config.list_dedup = *l;
        }
        config
    }

    pub fn embedder(&self) -> Result<Embedder> {
        match &self.embedder {
            EmbedderConfig::Named(name) if name == "trigram" => {
                Ok(Embedder::Trigram(TrigramEmbedder::default()))
            }
            EmbedderConfig::Named(other) => Err(Error::Validation(format!(
                "unknown embedder {other:?} (expected \"trigram\" or an http object)"
            ))),
            EmbedderConfig::Http {
                endpoint_url,
                model_id,
                timeout_secs,
            } => Ok(Embedder::Http(Box::new(HttpEmbedder {
                endpoint_url: endpoint_url.clone(),
                model_id: model_id.clone(),
                api_key: std::env::var("QA_API_KEY_EMBEDDER").ok(),
                timeout_secs: *timeout_secs,
            }))),
        }
    }

    pub fn limits(&self) -> ConcurrencyLimits {
        ConcurrencyLimits {
            per_endpoint: self.per_endpoint_concurrency,
            global: self.global_concurrency,
        }
    }

    pub fn cache_path(&self) -> PathBuf {
        self.cache
            .clone()
            .unwrap_or_else(|| self.out_dir.join("cache.jsonl"))
    }

    pub fn index_path(&self) -> PathBuf {
        self.out_dir.join("index.json")
    }

    pub fn phase_a_path(&self) -> PathBuf {
        self.out_dir.join("phase_a.json")
    }
}
