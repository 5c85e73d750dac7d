//! Text embedding backends: a deterministic character-trigram embedder
//! for offline runs and tests, and an HTTP client for transformer
//! embedding endpoints. All embedders return L2-normalized vectors.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hash::fnv1a64;

use super::http::HttpClient;

/// Cosine similarity. Inputs are unit vectors, so this is a dot product;
/// mismatched dimensions compare only the common prefix.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Deterministic embedder: character trigrams hashed into a fixed number
/// of buckets, then L2-normalized. Strings shorter than three characters
/// hash as a single gram, so every input maps to a unit vector.
#[derive(Debug, Clone)]
pub struct TrigramEmbedder {
    pub dims: usize,
}

impl Default for TrigramEmbedder {
    fn default() -> Self {
        Self { dims: 64 }
    }
}

impl TrigramEmbedder {
    pub fn embed_one(&self, text: &str) -> Vec<f64> {
        let mut counts = vec![0.0f64; self.dims];
        let chars: Vec<char> = text.chars().collect();
        if chars.len() < 3 {
            let gram: String = chars.iter().collect();
            counts[(fnv1a64(gram.as_bytes()) % self.dims as u64) as usize] += 1.0;
        } else {
            for window in chars.windows(3) {
                let gram: String = window.iter().collect();
                counts[(fnv1a64(gram.as_bytes()) % self.dims as u64) as usize] += 1.0;
            }
        }
        l2_normalize(&mut counts);
        counts
    }
}

/// HTTP embedding endpoint: POST `{"model", "input": [...]}`, reading
/// `data[i].embedding`.
#[derive(Debug, Clone)]
pub struct HttpEmbedder {
    pub endpoint_url: String,
    pub model_id: String,
    pub api_key: Option<String>,
    pub timeout_secs: u64,
}

impl HttpEmbedder {
    fn embed_batch(&self, texts: &[String], client: &HttpClient) -> Result<Vec<Vec<f64>>> {
        let body = json!({ "model": self.model_id, "input": texts });
        let response = client.post_json(
            "embedder",
            &self.endpoint_url,
            self.api_key.as_deref(),
            &body,
            std::time::Duration::from_secs(self.timeout_secs),
        )?;
        let data = response
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Embedding("response missing data array".into()))?;
        if data.len() != texts.len() {
            return Err(Error::Embedding(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                data.len()
            )));
        }
        data.iter()
            .map(|item| {
                let raw = item
                    .get("embedding")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Embedding("entry missing embedding".into()))?;
                let mut v: Vec<f64> = raw.iter().filter_map(Value::as_f64).collect();
                if v.len() != raw.len() || v.is_empty() {
                    return Err(Error::Embedding("non-numeric embedding entry".into()));
                }
                l2_normalize(&mut v);
                Ok(v)
            })
            .collect()
    }
}

/// An embedding backend selected by configuration.
#[derive(Debug, Clone)]
pub enum Embedder {
    Trigram(TrigramEmbedder),
    Http(Box<HttpEmbedder>),
}

impl Default for Embedder {
    fn default() -> Self {
        Self::Trigram(TrigramEmbedder::default())
    }
}

impl Embedder {
    /// Embeds a batch of texts into unit vectors, one per input.
    pub fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>> {
        match self {
            Self::Trigram(t) => Ok(texts.iter().map(|s| t.embed_one(s)).collect()),
            Self::Http(h) => h.embed_batch(texts, &HttpClient::new()),
        }
    }

    pub fn embed_one(&self, text: &str) -> Result<Vec<f64>> {
        Ok(self
            .embed(std::slice::from_ref(&text.to_string()))?
            .remove(0))
    }
}

fn l2_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
