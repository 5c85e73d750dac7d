//! Embedding-cosine deduplication of answer phrases.

use serde::{Deserialize, Serialize};

use crate::data::NormalizedPhrase;
use crate::error::Result;
use crate::gateway::{cosine, Embedder};

/// Cosine threshold for pruning near-duplicates. Thresholds above 1
/// disable pruning by construction (cosine never reaches them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DedupConfig {
    pub enabled: bool,
    pub threshold: f64,
}

impl Default for DedupConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            threshold: 0.7,
        }
    }
}

/// Greedy scan in the given order: a phrase is dropped when its cosine to
/// any already-kept phrase reaches the threshold, so earlier (higher
/// ranked) phrases survive. Embedding failure is an error; deduplication
/// is never silently partial.
pub fn deduplicate(
    phrases: &[(NormalizedPhrase, f64)],
    config: &DedupConfig,
    embedder: &Embedder,
) -> Result<Vec<(NormalizedPhrase, f64)>> {
    if phrases.is_empty() {
        return Ok(Vec::new());
    }
    let texts: Vec<String> = phrases.iter().map(|(p, _)| p.norm.clone()).collect();
    let vectors = embedder.embed(&texts)?;

    let mut kept: Vec<(NormalizedPhrase, f64)> = Vec::with_capacity(phrases.len());
    let mut kept_vectors: Vec<&Vec<f64>> = Vec::with_capacity(phrases.len());
    for (i, (phrase, score)) in phrases.iter().enumerate() {
        // Identical vectors have cosine exactly 1 mathematically; bypass
        // the dot product so rounding cannot leak duplicates past τ = 1.
        // Thresholds above 1 disable pruning entirely.
        let duplicate = kept_vectors.iter().any(|kv| {
            (config.threshold <= 1.0 && **kv == vectors[i])
                || cosine(kv, &vectors[i]) >= config.threshold
        });
        if !duplicate {
            kept.push((phrase.clone(), *score));
            kept_vectors.push(&vectors[i]);
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::normalize;
    use proptest::prelude::*;

    fn scored(items: &[&str]) -> Vec<(NormalizedPhrase, f64)> {
        items
            .iter()
            .enumerate()
            .map(|(i, s)| (normalize(s), 1.0 / (i as f64 + 1.0)))
            .collect()
    }

    #[test]
    fn identical_strings_collapse_at_any_threshold() {
        let input = scored(&["heart attack", "heart attack"]);
        let out = deduplicate(
            &input,
            &DedupConfig {
                enabled: true,
                threshold: 1.0,
            },
            &Embedder::default(),
        )
        .unwrap();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn threshold_above_one_disables_pruning() {
        let input = scored(&["heart attack", "heart attacks", "stroke"]);
        let out = deduplicate(
            &input,
            &DedupConfig {
                enabled: true,
                threshold: 1.01,
            },
            &Embedder::default(),
        )
        .unwrap();
        assert_eq!(out, input);
    }

    #[test]
    fn near_duplicate_pruned_at_point_seven() {
        let input = scored(&["heart attack", "heart attacks", "stroke"]);
        let out = deduplicate(
            &input,
            &DedupConfig {
                enabled: true,
                threshold: 0.7,
            },
            &Embedder::default(),
        )
        .unwrap();
        let norms: Vec<&str> = out.iter().map(|(p, _)| p.norm.as_str()).collect();
        assert_eq!(norms, vec!["heart attack", "stroke"]);
    }

    proptest! {
        /// Output is a subsequence of input, and lowering the threshold
        /// never increases the survivor count.
        #[test]
        fn subsequence_and_monotone_pruning(
            items in proptest::collection::vec("[a-f]{1,8}", 0..8),
            t_low in 0.0f64..=1.0,
            t_delta in 0.0f64..=0.5,
        ) {
            let input = scored(&items.iter().map(String::as_str).collect::<Vec<_>>());
            let embedder = Embedder::default();
            let low = deduplicate(&input, &DedupConfig { enabled: true, threshold: t_low }, &embedder).unwrap();
            let high = deduplicate(&input, &DedupConfig { enabled: true, threshold: (t_low + t_delta).min(1.01) }, &embedder).unwrap();

            // Subsequence check.
            let mut cursor = 0usize;
            for (p, _) in &low {
                let found = input[cursor..].iter().position(|(q, _)| q == p);
                prop_assert!(found.is_some(), "{} not in order", p.norm);
                cursor += found.unwrap() + 1;
            }
            prop_assert!(low.len() <= high.len());
        }
    }
}
