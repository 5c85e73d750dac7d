//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed JSON in an input file. Carries the byte offset of the
    /// first unparseable position.
    #[error("parse error in {path} at byte offset {offset}: {detail}")]
    Parse {
        path: String,
        offset: usize,
        detail: String,
    },

    /// Structurally valid input that violates a domain invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Network-level failure (timeout, connection refused) after retries.
    /// Never cached.
    #[error("transport error for model {model}: {detail}")]
    Transport { model: String, detail: String },

    /// HTTP endpoint answered with a non-2xx status.
    #[error("protocol error for model {model}: HTTP {status}")]
    Protocol { model: String, status: u16 },

    /// A scripted model has no entry matching the prompt.
    #[error("script error for model {model}: no entry matches prompt")]
    Script { model: String },

    /// The prediction cache lacks an entry the caller depends on.
    #[error("stale cache: missing prediction for model {model} on question {question}")]
    Staleness { model: String, question: String },

    /// Context construction produced no usable text.
    #[error("empty context for question {question}: {detail}")]
    EmptyContext { question: String, detail: String },

    /// Snippet extraction on a document with an empty abstract; callers
    /// skip the document.
    #[error("no snippet for document {doc_id}: empty abstract")]
    NoSnippet { doc_id: String },

    /// Embedding backend failure.
    #[error("embedding error: {0}")]
    Embedding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
