//! JSON-Lines corpus store keyed by document id.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Document;
use crate::error::{Error, Result};

/// In-memory document store. Immutable after load; shareable read-only
/// across concurrent workers.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Corpus {
    docs: BTreeMap<String, Document>,
    /// Non-fatal anomalies observed during load (duplicate ids, empty abstracts).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a document. Duplicate ids follow last-record-wins and record
    /// a warning; empty abstracts are kept but flagged (they are skipped by
    /// snippet extraction).
    pub fn insert(&mut self, doc: Document) {
        if self.docs.contains_key(&doc.doc_id) {
            self.warnings
                .push(format!("duplicate doc_id {}: last record wins", doc.doc_id));
        }
        if doc.abstract_text.is_empty() {
            self.warnings
                .push(format!("doc_id {} has an empty abstract", doc.doc_id));
        }
        self.docs.insert(doc.doc_id.clone(), doc);
    }

    pub fn get(&self, doc_id: &str) -> Option<&Document> {
        self.docs.get(doc_id)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Documents in ascending doc_id order.
    pub fn iter(&self) -> impl Iterator<Item = &Document> {
        self.docs.values()
    }
}

impl FromIterator<Document> for Corpus {
    fn from_iter<T: IntoIterator<Item = Document>>(iter: T) -> Self {
        let mut corpus = Corpus::new();
        for doc in iter {
            corpus.insert(doc);
        }
        corpus
    }
}

/// Loads a JSON-Lines corpus (one `Document` object per line, blank lines
/// skipped). Duplicate doc_ids keep the last record and emit a warning.
pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut corpus = Corpus::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            offset: e.column().saturating_sub(1),
            detail: format!("line {}: {}", lineno + 1, e),
        })?;
        corpus.insert(doc);
    }
    Ok(corpus)
}
