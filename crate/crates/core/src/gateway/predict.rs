//! Prediction orchestration: prompt derivation, completion, parsing, and
//! cache population with bounded concurrency.

use std::collections::BTreeMap;
use std::sync::{Condvar, Mutex};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::data::{Corpus, Question};
use crate::error::{Error, Result};
use crate::hash::fnv1a64_str;
use crate::prompting::{build_context, render_prompt, ContextStrategy};

use super::http::{env_var_suffix, HttpClient};
use super::scripted::complete_scripted;
use super::{ModelAnswer, ModelKind, ModelSpec, PredictionCache, PredictionRecord, Roster};

/// In-flight request bounds for live endpoints.
#[derive(Debug, Clone, Copy)]
pub struct ConcurrencyLimits {
    pub per_endpoint: usize,
    pub global: usize,
}

impl Default for ConcurrencyLimits {
    fn default() -> Self {
        Self {
            per_endpoint: 4,
            global: 16,
        }
    }
}

/// Outcome counters for a cache-population run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopulateStats {
    pub hits: usize,
    pub misses: usize,
    pub completed: usize,
    /// Human-readable failure lines, one per (model, question) left uncovered.
    pub failures: Vec<String>,
}

/// Sends one prompt to one model: scripted models resolve from their
/// table, chat models POST to their (env-overridable) endpoint with
/// temperature 0 and a single user message.
pub fn complete(model: &ModelSpec, prompt: &str, http: &HttpClient) -> Result<String> {
    match model.kind {
        ModelKind::Scripted => complete_scripted(model, prompt),
        ModelKind::Chat => {
            let suffix = env_var_suffix(&model.name);
            let url = std::env::var(format!("QA_ENDPOINT_{suffix}"))
                .unwrap_or_else(|_| model.endpoint_url.clone());
            let api_key = std::env::var(format!("QA_API_KEY_{suffix}")).ok();
            let body = json!({
                "model": model.model_id,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": 0,
            });
            let response = http.post_json(
                &model.name,
                &url,
                api_key.as_deref(),
                &body,
                Duration::from_secs(model.request_timeout_secs),
            )?;
            extract_message(&model.name, &response)
        }
    }
}

fn extract_message(model: &str, response: &Value) -> Result<String> {
    response
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| {
            Error::Validation(format!(
                "model {model}: chat response missing choices[0].message.content"
            ))
        })
}

/// Shared context for prediction runs over a fixed corpus and roster.
pub struct Gateway<'a> {
    pub roster: &'a Roster,
    pub corpus: &'a Corpus,
    pub http: HttpClient,
    /// Retrieval-predicted doc ids per question, used by the
    /// abstracts_extended strategy.
    pub extra_docs: BTreeMap<String, Vec<String>>,
}

impl<'a> Gateway<'a> {
    pub fn new(roster: &'a Roster, corpus: &'a Corpus) -> Self {
        Self {
            roster,
            corpus,
            http: HttpClient::new(),
            extra_docs: BTreeMap::new(),
        }
    }

    fn prompt_for(&self, question: &Question, strategy: &ContextStrategy) -> Result<String> {
        let extra = self.extra_docs.get(&question.id).map(Vec::as_slice);
        let context = build_context(question, strategy, self.corpus, extra)?;
        Ok(render_prompt(question.qtype, &context, &question.body))
    }

    /// Returns the cached answer for (model, question, strategy) when the
    /// prompt is unchanged; otherwise completes, parses, persists, and
    /// returns. Parse failures are cached so reruns are stable; transport
    /// failures are never cached.
    pub fn cached_predict(
        &self,
        model: &ModelSpec,
        question: &Question,
        strategy: &ContextStrategy,
        cache: &mut PredictionCache,
    ) -> Result<ModelAnswer> {
        let prompt = self.prompt_for(question, strategy)?;
        let prompt_hash = fnv1a64_str(&prompt);
        if let Some(record) =
            cache.lookup(&model.name, &question.id, strategy.variant, question.qtype)
        {
            if record.prompt_hash == prompt_hash {
                return Ok(record.parsed.clone());
            }
        }
        let raw_response = complete(model, &prompt, &self.http)?;
        let parsed = ModelAnswer::parse(question.qtype, &raw_response);
        let record = PredictionRecord {
            model_name: model.name.clone(),
            question_id: question.id.clone(),
            strategy: strategy.variant,
            qtype: question.qtype,
            prompt_hash,
            raw_response,
            parsed: parsed.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        cache.insert(record)?;
        Ok(parsed)
    }

    /// Populates the cache for every (roster member, question) pair.
    /// Resumable: exact hits are skipped. Completions run on a bounded
    /// worker pool (global and per-endpoint limits); results are parsed
    /// and appended in deterministic (model, question) order.
    pub fn populate(
        &self,
        questions: &[Question],
        strategy: &ContextStrategy,
        cache: &mut PredictionCache,
        limits: ConcurrencyLimits,
    ) -> Result<PopulateStats> {
        let mut stats = PopulateStats::default();

        // (model index, question index, prompt, hash) for every miss.
        let mut tasks: Vec<(usize, usize, String, u64)> = Vec::new();
        for (mi, model) in self.roster.iter().enumerate() {
            for (qi, question) in questions.iter().enumerate() {
                let prompt = match self.prompt_for(question, strategy) {
                    Ok(p) => p,
                    Err(e) => {
                        stats
                            .failures
                            .push(format!("{} / {}: {e}", model.name, question.id));
                        continue;
                    }
                };
                let hash = fnv1a64_str(&prompt);
                if cache.contains_exact(
                    &model.name,
                    &question.id,
                    strategy.variant,
                    question.qtype,
                    hash,
                ) {
                    stats.hits += 1;
                } else {
                    tasks.push((mi, qi, prompt, hash));
                }
            }
        }
        stats.misses = tasks.len();

        let results = self.run_bounded(&tasks, limits);

        // Deterministic cache-file order regardless of completion order.
        let mut ordered: Vec<_> = results.into_iter().collect();
        ordered.sort_by_key(|(task_idx, _)| *task_idx);
        for (task_idx, outcome) in ordered {
            let (mi, qi, _, hash) = &tasks[task_idx];
            let model = self.roster.get(*mi).expect("task index in roster");
            let question = &questions[*qi];
            match outcome {
                Ok(raw_response) => {
                    let parsed = ModelAnswer::parse(question.qtype, &raw_response);
                    cache.insert(PredictionRecord {
                        model_name: model.name.clone(),
                        question_id: question.id.clone(),
                        strategy: strategy.variant,
                        qtype: question.qtype,
                        prompt_hash: *hash,
                        raw_response,
                        parsed,
                        timestamp: SystemTime::now()
                            .duration_since(UNIX_EPOCH)
                            .map(|d| d.as_secs())
                            .unwrap_or(0),
                    })?;
                    stats.completed += 1;
                }
                Err(e) => {
                    stats
                        .failures
                        .push(format!("{} / {}: {e}", model.name, question.id));
                }
            }
        }
        Ok(stats)
    }

    /// Runs completion tasks on a bounded pool. Scripted models bypass the
    /// endpoint semaphores.
    fn run_bounded(
        &self,
        tasks: &[(usize, usize, String, u64)],
        limits: ConcurrencyLimits,
    ) -> Vec<(usize, Result<String>)> {
        let endpoint_sems: BTreeMap<String, Semaphore> = self
            .roster
            .iter()
            .filter(|m| m.kind == ModelKind::Chat)
            .map(|m| (m.name.clone(), Semaphore::new(limits.per_endpoint)))
            .collect();
        let next = Mutex::new(0usize);
        let results = Mutex::new(Vec::with_capacity(tasks.len()));
        let workers = limits.global.max(1).min(tasks.len().max(1));
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let index = {
                        let mut n = next.lock().unwrap();
                        if *n >= tasks.len() {
                            return;
                        }
                        let i = *n;
                        *n += 1;
                        i
                    };
                    let (mi, _, prompt, _) = &tasks[index];
                    let model = self.roster.get(*mi).expect("task index in roster");
                    let outcome = match endpoint_sems.get(&model.name) {
                        Some(sem) => {
                            let _permit = sem.acquire();
                            complete(model, prompt, &self.http)
                        }
                        None => complete(model, prompt, &self.http),
                    };
                    results.lock().unwrap().push((index, outcome));
                });
            }
        });
        results.into_inner().unwrap()
    }
}

/// Minimal counting semaphore (std has none).
struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

struct Permit<'a>(&'a Semaphore);

impl Semaphore {
    fn new(permits: usize) -> Self {
        Self {
            permits: Mutex::new(permits.max(1)),
            available: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut permits = self.permits.lock().unwrap();
        while *permits == 0 {
            permits = self.available.wait(permits).unwrap();
        }
        *permits -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.permits.lock().unwrap() += 1;
        self.0.available.notify_one();
    }
}
