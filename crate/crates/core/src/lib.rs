//! Ensemble question answering over a biomedical abstract corpus.
//!
//! The pipeline retrieves documents with BM25+RM3, extracts the most
//! relevant snippet per document by embedding similarity, prompts a
//! configurable pool of chat models per question type, aggregates their
//! cached answers (majority jury for yes/no, scored union for factoids,
//! deduplicated union for lists), and exhaustively evaluates every model
//! subset to find the best ensemble per question type.
//!
//! Modules follow the pipeline stages:
//!
//! * [`data`] — questions, gold answers, documents, snippets, normalization
//! * [`retrieval`] — inverted index, BM25, RM3, snippets, re-ranking
//! * [`gateway`] — model roster, HTTP/scripted clients, prediction cache
//! * [`prompting`] — context building, templates, output parsing
//! * [`aggregation`] — jury vote, factoid merge, list union, dedup
//! * [`metrics`] — macro-F1, MRR, lenient accuracy, list F1, MAP/GMAP
//! * [`optimizer`] — exhaustive subset sweeps, kernels, scatter reports

pub mod aggregation;
pub mod data;
pub mod error;
pub mod gateway;
pub mod hash;
pub mod metrics;
pub mod optimizer;
pub mod prompting;
pub mod retrieval;

pub use aggregation::{AggregationConfig, DedupConfig, FinalAnswer};
pub use data::{
    load_corpus, load_questions, normalize, Corpus, Document, GoldAnswer, NormalizedPhrase,
    Question, QuestionType, Snippet, Vote,
};
pub use error::{Error, Result};
pub use gateway::{
    Embedder, Gateway, ModelAnswer, ModelKind, ModelSpec, ModelSubset, PredictionCache,
    PredictionRecord, Roster,
};
pub use metrics::MetricReport;
pub use optimizer::SweepResult;
pub use prompting::{ContextStrategy, StrategyKind};
pub use retrieval::{Bm25Params, InvertedIndex, RankedList, Rm3Params};
