//! Exhaustive model-subset optimization: enumerate every non-empty subset
//! of the roster, evaluate each against the prediction cache, rank them,
//! reduce winners to answer-preserving kernels, and emit
//! size-vs-performance scatter data.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::aggregation::{answer_question, AggregationConfig, FinalAnswer};
use crate::data::{Question, QuestionType};
use crate::error::{Error, Result};
use crate::gateway::{Embedder, ModelSubset, PredictionCache, Roster, MAX_ROSTER};
use crate::hash::fnv1a64_str;
use crate::metrics::{evaluate_subset, MetricReport};
use crate::prompting::ContextStrategy;

/// Yields every non-empty subset mask in `[1, 2^n - 1]` exactly once,
/// ascending.
pub fn enumerate_subsets(n: usize) -> Result<impl Iterator<Item = ModelSubset>> {
    if n == 0 || n > MAX_ROSTER {
        return Err(Error::Validation(format!(
            "roster size {n} outside supported range 1..={MAX_ROSTER}"
        )));
    }
    let count = (1u64 << n) - 1;
    Ok((1..=count).map(|mask| ModelSubset::from_mask(mask as u32)))
}

/// Results of an exhaustive sweep over one question type.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub qtype: QuestionType,
    /// Metric report per subset mask.
    pub per_subset: BTreeMap<u32, MetricReport>,
    /// Best subset: highest averaged metric, ties to the smaller subset,
    /// then the smaller mask.
    pub best: ModelSubset,
    /// Subsets sorted by descending averaged metric (same tie order).
    pub ranking: Vec<(ModelSubset, f64)>,
}

fn rank_order(a: &(u32, f64), b: &(u32, f64)) -> std::cmp::Ordering {
    b.1.total_cmp(&a.1)
        .then_with(|| {
            ModelSubset::from_mask(a.0)
                .size()
                .cmp(&ModelSubset::from_mask(b.0).size())
        })
        .then_with(|| a.0.cmp(&b.0))
}

/// Evaluates every enumerated subset. `workers > 1` splits the masks over
/// threads sharing the read-only cache snapshot; the result is identical
/// to a sequential sweep regardless of worker count or completion order.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    roster: &Roster,
    cache: &PredictionCache,
    golds: &[Question],
    qtype: QuestionType,
    strategy: &ContextStrategy,
    config: &AggregationConfig,
    embedder: &Embedder,
    workers: usize,
) -> Result<SweepResult> {
    let masks: Vec<ModelSubset> = enumerate_subsets(roster.len())?.collect();

    // Completeness pre-flight: a single missing (model, question) pair
    // would fail every subset containing the model, so check up front and
    // name the first gap deterministically (roster order, then question
    // order).
    for model in roster.iter() {
        for q in golds.iter().filter(|q| q.qtype == qtype) {
            if cache
                .lookup(&model.name, &q.id, strategy.variant, qtype)
                .is_none()
            {
                return Err(Error::Staleness {
                    model: model.name.clone(),
                    question: q.id.clone(),
                });
            }
        }
    }

    let evaluated: Vec<(u32, MetricReport)> = if workers <= 1 {
        let mut out = Vec::with_capacity(masks.len());
        for subset in &masks {
            let report = evaluate_subset(
                *subset, cache, golds, qtype, strategy, config, roster, embedder,
            )?;
            out.push((subset.mask(), report));
        }
        out
    } else {
        let next = Mutex::new(0usize);
        let collected: Mutex<Vec<(u32, MetricReport)>> =
            Mutex::new(Vec::with_capacity(masks.len()));
        let first_error: Mutex<Option<Error>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..workers.min(masks.len()) {
                scope.spawn(|| loop {
                    let index = {
                        let mut n = next.lock().unwrap();
                        if *n >= masks.len() || first_error.lock().unwrap().is_some() {
                            return;
                        }
                        let i = *n;
                        *n += 1;
                        i
                    };
                    let subset = masks[index];
                    match evaluate_subset(
                        subset, cache, golds, qtype, strategy, config, roster, embedder,
                    ) {
                        Ok(report) => {
                            collected.lock().unwrap().push((subset.mask(), report));
                        }
                        Err(e) => {
                            first_error.lock().unwrap().get_or_insert(e);
                            return;
                        }
                    }
                });
            }
        });
        if let Some(e) = first_error.into_inner().unwrap() {
            return Err(e);
        }
        collected.into_inner().unwrap()
    };

    let per_subset: BTreeMap<u32, MetricReport> = evaluated.into_iter().collect();
    let mut ranking: Vec<(u32, f64)> = per_subset
        .iter()
        .map(|(mask, report)| (*mask, report.averaged))
        .collect();
    ranking.sort_by(rank_order);
    let best = ModelSubset::from_mask(ranking[0].0);
    Ok(SweepResult {
        qtype,
        per_subset,
        best,
        ranking: ranking
            .into_iter()
            .map(|(mask, value)| (ModelSubset::from_mask(mask), value))
            .collect(),
    })
}

/// Greedily drops members (in roster order) whose removal leaves every
/// per-question final answer unchanged, returning the minimal subset
/// under that order. The kernel answers every question identically to the
/// input subset.
#[allow(clippy::too_many_arguments)]
pub fn kernel_reduce(
    subset: ModelSubset,
    cache: &PredictionCache,
    golds: &[Question],
    qtype: QuestionType,
    strategy: &ContextStrategy,
    config: &AggregationConfig,
    roster: &Roster,
    embedder: &Embedder,
) -> Result<ModelSubset> {
    let questions: Vec<&Question> = golds.iter().filter(|q| q.qtype == qtype).collect();
    let answers_of = |s: ModelSubset| -> Result<Vec<FinalAnswer>> {
        questions
            .iter()
            .map(|q| answer_question(s, q, strategy, cache, config, roster, embedder))
            .collect()
    };
    let reference = answers_of(subset)?;
    let mut kernel = subset;
    for index in 0..roster.len() {
        if !kernel.contains(index) || kernel.size() == 1 {
            continue;
        }
        let candidate = kernel.without(index);
        if answers_of(candidate)? == reference {
            kernel = candidate;
        }
    }
    Ok(kernel)
}

/// One scatter row: subset size, round-averaged metric, deterministic
/// jitter for plotting discrete metrics, and the subset identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub size: usize,
    pub averaged_metric: f64,
    pub jitter: f64,
    pub mask: u32,
    pub members: Vec<String>,
}

/// Flattens a sweep into scatter rows, one per subset, ordered by mask.
/// Jitter is a hash of the mask mapped into [-0.01, 0.01], so equal
/// metrics still plot as distinct points.
pub fn scatter_report(sweep: &SweepResult, roster: &Roster) -> Vec<ScatterRow> {
    sweep
        .per_subset
        .iter()
        .map(|(mask, report)| {
            let subset = ModelSubset::from_mask(*mask);
            ScatterRow {
                size: subset.size(),
                averaged_metric: report.averaged,
                jitter: jitter_for(*mask),
                mask: *mask,
                members: subset.member_names(roster),
            }
        })
        .collect()
}

fn jitter_for(mask: u32) -> f64 {
    let h = fnv1a64_str(&format!("jitter:{mask}"));
    ((h % 2001) as f64 / 1000.0 - 1.0) * 0.01
}

/// Full sweep report as CSV: `subset_mask,subset_names,size,metric` plus
/// one column per round, rows ordered by mask.
pub fn sweep_csv(sweep: &SweepResult, roster: &Roster) -> String {
    let mut rounds: Vec<String> = sweep
        .per_subset
        .values()
        .flat_map(|r| r.per_round.keys().cloned())
        .collect();
    rounds.sort();
    rounds.dedup();

    let mut out = String::from("subset_mask,subset_names,size,metric");
    for round in &rounds {
        out.push(',');
        out.push_str(round);
    }
    out.push('\n');
    for (mask, report) in &sweep.per_subset {
        let subset = ModelSubset::from_mask(*mask);
        out.push_str(&format!(
            "{:#x},{},{},{}",
            mask,
            subset.member_names(roster).join("+"),
            subset.size(),
            report.averaged
        ));
        for round in &rounds {
            out.push(',');
            if let Some(v) = report.per_round.get(round) {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// The best `k` subsets as JSON for pipeline-configuration handoff.
pub fn top_k_json(sweep: &SweepResult, roster: &Roster, k: usize) -> serde_json::Value {
    let top: Vec<serde_json::Value> = sweep
        .ranking
        .iter()
        .take(k)
        .map(|(subset, metric)| {
            serde_json::json!({
                "mask": subset.mask(),
                "members": subset.member_names(roster),
                "size": subset.size(),
                "metric": metric,
            })
        })
        .collect();
    serde_json::json!({
        "qtype": sweep.qtype.as_str(),
        "best": top.first().cloned().unwrap_or(serde_json::Value::Null),
        "top": top,
    })
}

/// Renders scatter rows as CSV (`size,averaged_metric,jitter,mask,members`;
/// members joined by `+`).
pub fn scatter_csv(rows: &[ScatterRow]) -> String {
    let mut out = String::from("size,averaged_metric,jitter,mask,members\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{:#x},{}\n",
            row.size,
            row.averaged_metric,
            row.jitter,
            row.mask,
            row.members.join("+")
        ));
    }
    out
}
