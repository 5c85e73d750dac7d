//! Subcommand implementations. Each returns the process exit code:
//! 0 success, 1 incomplete data, 2 bad invocation or paths.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use bioqa_core::aggregation::{answer_question, phase_b_json, FinalAnswer};
use bioqa_core::data::{Question, QuestionType};
use bioqa_core::gateway::{Gateway, ModelSubset, PredictionCache, Roster};
use bioqa_core::metrics::{
    collect_answers, lenient_accuracy, list_f1, macro_f1_yesno, mrr, phrase_predictions,
    yesno_predictions, MetricReport,
};
use bioqa_core::optimizer::{scatter_csv, scatter_report, sweep, sweep_csv, top_k_json};
use bioqa_core::retrieval::{
    build_index, phase_a_json, rerank_by_snippet, retrieve, InvertedIndex,
};
use bioqa_core::{load_corpus, Error, Result};

use crate::config::RunConfig;

const FINAL_DOCS: usize = 10;

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Overwrite-in-place via a temp file so readers never observe a torn
/// artifact.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    write_text(&tmp, text)?;
    fs::rename(&tmp, path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn json_pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    text
}

/// Builds the inverted index from the corpus and persists it.
pub fn cmd_ingest(config: &RunConfig) -> Result<i32> {
    let corpus = load_corpus(&config.corpus)?;
    for warning in &corpus.warnings {
        eprintln!("warning: {warning}");
    }
    if corpus.is_empty() {
        eprintln!("warning: corpus {} is empty", config.corpus.display());
    }
    let index = build_index(&corpus);
    let path = config.index_path();
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| Error::Io {
            path: parent.display().to_string(),
            source,
        })?;
    }
    let tmp = path.with_extension("json.tmp");
    index.save(&tmp)?;
    fs::rename(&tmp, &path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    println!(
        "ingested {} documents into {}",
        corpus.len(),
        path.display()
    );
    Ok(0)
}

/// Retrieves top-k candidates per question, re-ranks by snippet to the
/// final 10, and writes Phase-A JSON.
pub fn cmd_retrieve(config: &RunConfig, k: usize, out: Option<PathBuf>) -> Result<i32> {
    let corpus = load_corpus(&config.corpus)?;
    let index = InvertedIndex::load(&config.index_path())?;
    let embedder = config.embedder()?;
    let questions = config.load_all_questions()?;

    let mut results = Vec::with_capacity(questions.len());
    for question in &questions {
        let candidates = retrieve(question, &index, &config.bm25, &config.rm3, k);
        let (ranked, snippets) =
            rerank_by_snippet(question, &candidates, &corpus, &embedder, FINAL_DOCS)?;
        results.push((question.id.clone(), ranked, snippets));
    }
    let path = out.unwrap_or_else(|| config.phase_a_path());
    write_atomic(&path, &json_pretty(&phase_a_json(&results)))?;
    println!(
        "retrieved documents for {} questions into {}",
        results.len(),
        path.display()
    );
    Ok(0)
}

/// Doc ids per question from a Phase-A export, for the
/// abstracts_extended strategy.
fn load_extra_docs(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        offset: 0,
        detail: e.to_string(),
    })?;
    let mut map = BTreeMap::new();
    for q in value
        .pointer("/questions")
        .and_then(Value::as_array)
        .unwrap_or(&Vec::new())
    {
        let Some(id) = q.get("id").and_then(Value::as_str) else {
            continue;
        };
        let docs: Vec<String> = q
            .get("documents")
            .and_then(Value::as_array)
            .map(|items| {
                items
                    .iter()
                    .filter_map(Value::as_str)
                    .map(|url| {
                        url.trim_end_matches('/')
                            .rsplit('/')
                            .next()
                            .unwrap_or(url)
                            .to_string()
                    })
                    .collect()
            })
            .unwrap_or_default();
        map.insert(id.to_string(), docs);
    }
    Ok(map)
}

/// Queries every (roster member, question) pair, skipping cache hits.
/// Exit 1 when any pair is left uncovered.
pub fn cmd_populate(config: &RunConfig) -> Result<i32> {
    let corpus = load_corpus(&config.corpus)?;
    let roster = config.roster()?;
    let questions = config.load_all_questions()?;
    let strategy = config.strategy()?;
    let mut cache = PredictionCache::open(&config.cache_path())?;

    let mut gateway = Gateway::new(&roster, &corpus);
    if strategy.variant == bioqa_core::StrategyKind::AbstractsExtended {
        gateway.extra_docs = load_extra_docs(&config.phase_a_path())?;
    }
    let stats = gateway.populate(&questions, &strategy, &mut cache, config.limits())?;
    println!(
        "cache: {} hits, {} misses, {} completed",
        stats.hits, stats.misses, stats.completed
    );
    if !stats.failures.is_empty() {
        let mut per_model: BTreeMap<&str, usize> = BTreeMap::new();
        for failure in &stats.failures {
            let model = failure.split(" / ").next().unwrap_or("?");
            *per_model.entry(model).or_insert(0) += 1;
            eprintln!("failed: {failure}");
        }
        for (model, count) in per_model {
            eprintln!("model {model}: {count} questions uncovered");
        }
        return Ok(1);
    }
    Ok(0)
}

fn parse_qtype(s: &str) -> Result<QuestionType> {
    QuestionType::parse(s).ok_or_else(|| Error::Validation(format!("unknown question type {s:?}")))
}

/// `--subset` accepts comma-separated member names or a hex mask (0x..).
fn parse_subset(roster: &Roster, arg: &str) -> Result<ModelSubset> {
    let trimmed = arg.trim();
    if let Some(hex) = trimmed
        .strip_prefix("0x")
        .or_else(|| trimmed.strip_prefix("0X"))
    {
        let mask = u32::from_str_radix(hex, 16)
            .map_err(|e| Error::Validation(format!("bad subset mask {trimmed:?}: {e}")))?;
        let full = ((1u64 << roster.len()) - 1) as u32;
        if mask == 0 || mask & !full != 0 {
            return Err(Error::Validation(format!(
                "subset mask {trimmed} outside [1, {:#x}]",
                full
            )));
        }
        return Ok(ModelSubset::from_mask(mask));
    }
    let names: Vec<&str> = trimmed
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    roster.subset_from_names(&names)
}

/// Evaluates every subset of the roster for one question type and writes
/// the sweep CSV, scatter CSV, and top-subsets JSON.
pub fn cmd_sweep(config: &RunConfig, qtype_arg: &str, out: Option<PathBuf>) -> Result<i32> {
    let qtype = parse_qtype(qtype_arg)?;
    let roster = config.roster()?;
    let questions = config.load_all_questions()?;
    let strategy = config.strategy()?;
    let aggregation = config.aggregation();
    let embedder = config.embedder()?;
    let cache = PredictionCache::open(&config.cache_path())?;

    let result = sweep(
        &roster,
        &cache,
        &questions,
        qtype,
        &strategy,
        &aggregation,
        &embedder,
        config.workers,
    )?;

    let out_dir = out.unwrap_or_else(|| config.out_dir.clone());
    let stem = qtype.as_str();
    write_text(
        &out_dir.join(format!("sweep_{stem}.csv")),
        &sweep_csv(&result, &roster),
    )?;
    write_text(
        &out_dir.join(format!("sweep_{stem}.json")),
        &json_pretty(&serde_json::to_value(&result).expect("sweep serializes")),
    )?;
    write_text(
        &out_dir.join(format!("scatter_{stem}.csv")),
        &scatter_csv(&scatter_report(&result, &roster)),
    )?;
    write_text(
        &out_dir.join(format!("top_subsets_{stem}.json")),
        &json_pretty(&top_k_json(&result, &roster, 10)),
    )?;

    let best_names = result.best.member_names(&roster).join("+");
    let best_metric = result.per_subset[&result.best.mask()].averaged;
    println!(
        "swept {} subsets for {stem}: best [{best_names}] metric {best_metric}",
        result.ranking.len()
    );
    Ok(0)
}

/// Emits Phase-B answers for a chosen subset. Summary questions are
/// answered only when a summary model is configured.
pub fn cmd_answer(config: &RunConfig, subset_arg: &str, out: Option<PathBuf>) -> Result<i32> {
    let roster = config.roster()?;
    let subset = parse_subset(&roster, subset_arg)?;
    let questions = config.load_all_questions()?;
    let strategy = config.strategy()?;
    let aggregation = config.aggregation();
    let embedder = config.embedder()?;
    let cache = PredictionCache::open(&config.cache_path())?;

    let mut answers: Vec<(&Question, FinalAnswer)> = Vec::with_capacity(questions.len());
    for question in &questions {
        if question.qtype == QuestionType::Summary && aggregation.summary_model.is_none() {
            eprintln!(
                "skipping summary question {}: no summary model configured",
                question.id
            );
            continue;
        }
        let answer = answer_question(
            subset,
            question,
            &strategy,
            &cache,
            &aggregation,
            &roster,
            &embedder,
        )?;
        answers.push((question, answer));
    }
    let path = out.unwrap_or_else(|| config.out_dir.join("answers.json"));
    write_atomic(&path, &json_pretty(&phase_b_json(&answers)))?;
    println!(
        "answered {} questions with subset [{}] into {}",
        answers.len(),
        subset.member_names(&roster).join("+"),
        path.display()
    );
    Ok(0)
}

/// Scores a subset's answers against the gold set and prints one line per
/// metric; also writes the reports as JSON.
pub fn cmd_eval(
    config: &RunConfig,
    subset_arg: Option<&str>,
    qtype_arg: Option<&str>,
) -> Result<i32> {
    let roster = config.roster()?;
    let subset = match subset_arg {
        Some(arg) => parse_subset(&roster, arg)?,
        None => roster.full_subset(),
    };
    let questions = config.load_all_questions()?;
    let strategy = config.strategy()?;
    let aggregation = config.aggregation();
    let embedder = config.embedder()?;
    let cache = PredictionCache::open(&config.cache_path())?;

    let requested: Vec<QuestionType> = match qtype_arg {
        Some(s) => vec![parse_qtype(s)?],
        None => {
            let mut present: Vec<QuestionType> = questions.iter().map(|q| q.qtype).collect();
            present.sort();
            present.dedup();
            present
        }
    };

    let mut reports: BTreeMap<String, MetricReport> = BTreeMap::new();
    for qtype in requested {
        if qtype == QuestionType::Summary {
            eprintln!("summary answers are judged manually; skipping");
            continue;
        }
        let answers = collect_answers(
            subset,
            &cache,
            &questions,
            qtype,
            &strategy,
            &aggregation,
            &roster,
            &embedder,
        )?;
        match qtype {
            QuestionType::YesNo => {
                let preds = yesno_predictions(&answers);
                let report = macro_f1_yesno(&preds, &questions)?;
                println!("yesno macro_f1 {}", report.averaged);
                println!("yesno accuracy {}", report.components["accuracy"]);
                reports.insert("yesno.macro_f1".into(), report);
            }
            QuestionType::Factoid => {
                let preds = phrase_predictions(&answers);
                let mrr_report = mrr(&preds, &questions);
                let lenient = lenient_accuracy(&preds, &questions);
                println!("factoid mrr {}", mrr_report.averaged);
                println!("factoid lenient_accuracy {}", lenient.averaged);
                reports.insert("factoid.mrr".into(), mrr_report);
                reports.insert("factoid.lenient_accuracy".into(), lenient);
            }
            QuestionType::List => {
                let preds = phrase_predictions(&answers);
                let report = list_f1(&preds, &questions);
                println!("list f1 {}", report.averaged);
                println!("list precision {}", report.components["precision"]);
                println!("list recall {}", report.components["recall"]);
                reports.insert("list.f1".into(), report);
            }
            QuestionType::Summary => unreachable!(),
        }
    }
    let value = serde_json::to_value(&reports).expect("reports serialize");
    write_atomic(&config.out_dir.join("eval.json"), &json_pretty(&value))?;
    Ok(0)
}
