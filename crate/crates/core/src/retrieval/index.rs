//! Inverted index over the corpus.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Corpus;
use crate::error::{Error, Result};

/// Casefolded alphanumeric runs.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Term postings plus document statistics. Immutable after build; the
/// forward map backs RM3's per-document language models.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InvertedIndex {
    /// term -> [(doc_id, term frequency)], sorted by doc_id.
    postings: BTreeMap<String, Vec<(String, u32)>>,
    /// doc_id -> [(term, term frequency)], sorted by term.
    doc_terms: BTreeMap<String, Vec<(String, u32)>>,
    doc_lengths: BTreeMap<String, u32>,
    avg_doc_len: f64,
    doc_count: usize,
}

impl InvertedIndex {
    pub fn postings(&self, term: &str) -> Option<&[(String, u32)]> {
        self.postings.get(term).map(Vec::as_slice)
    }

    /// Number of documents containing the term.
    pub fn document_frequency(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    pub fn term_frequency(&self, term: &str, doc_id: &str) -> u32 {
        self.postings
            .get(term)
            .and_then(|p| {
                p.binary_search_by(|(id, _)| id.as_str().cmp(doc_id))
                    .ok()
                    .map(|i| p[i].1)
            })
            .unwrap_or(0)
    }

    pub fn doc_len(&self, doc_id: &str) -> u32 {
        self.doc_lengths.get(doc_id).copied().unwrap_or(0)
    }

    /// Term vector of a document, sorted by term.
    pub fn doc_terms(&self, doc_id: &str) -> Option<&[(String, u32)]> {
        self.doc_terms.get(doc_id).map(Vec::as_slice)
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.avg_doc_len
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).expect("index serializes");
        fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            offset: 0,
            detail: e.to_string(),
        })
    }
}

/// Builds the index from title + abstract tokens of every document.
/// An empty corpus yields a valid empty index.
pub fn build_index(corpus: &Corpus) -> InvertedIndex {
    let mut postings: BTreeMap<String, Vec<(String, u32)>> = BTreeMap::new();
    let mut doc_terms: BTreeMap<String, Vec<(String, u32)>> = BTreeMap::new();
    let mut doc_lengths = BTreeMap::new();
    let mut total_len = 0u64;

    for doc in corpus.iter() {
        let text = format!("{} {}", doc.title, doc.abstract_text);
        let tokens = tokenize(&text);
        total_len += tokens.len() as u64;
        doc_lengths.insert(doc.doc_id.clone(), tokens.len() as u32);

        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        for token in tokens {
            *counts.entry(token).or_insert(0) += 1;
        }
        doc_terms.insert(
            doc.doc_id.clone(),
            counts.iter().map(|(t, c)| (t.clone(), *c)).collect(),
        );
        for (term, count) in counts {
            postings
                .entry(term)
                .or_default()
                .push((doc.doc_id.clone(), count));
        }
    }
    // Corpus iterates in ascending doc_id order, so postings are already
    // sorted by doc_id.
    let doc_count = doc_lengths.len();
    let avg_doc_len = if doc_count == 0 {
        0.0
    } else {
        total_len as f64 / doc_count as f64
    };
    InvertedIndex {
        postings,
        doc_terms,
        doc_lengths,
        avg_doc_len,
        doc_count,
    }
}
