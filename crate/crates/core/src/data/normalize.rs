//! Phrase normalization used for answer unioning, deduplication, and
//! gold matching: casefold, collapse whitespace runs, strip surrounding
//! whitespace and punctuation.

use serde::{Deserialize, Serialize};

/// Punctuation stripped from the ends of a phrase.
const EDGE_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '"', '\'', '(', ')', '[', ']'];

/// A phrase paired with its normalized matching key.
///
/// `norm` is idempotent: normalizing it again yields the same string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NormalizedPhrase {
    pub raw: String,
    pub norm: String,
}

/// Normalizes a phrase: casefold, collapse internal whitespace runs to a
/// single space, then strip leading/trailing whitespace and edge punctuation.
///
/// `norm` is empty only when `raw` consists purely of whitespace and
/// punctuation.
pub fn normalize(raw: &str) -> NormalizedPhrase {
    let lowered = raw.to_lowercase();
    let collapsed = lowered.split_whitespace().collect::<Vec<_>>().join(" ");
    let norm = collapsed
        .trim_matches(|c: char| c.is_whitespace() || EDGE_PUNCT.contains(&c))
        .to_string();
    NormalizedPhrase {
        raw: raw.to_string(),
        norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strips_case_space_and_punctuation() {
        assert_eq!(normalize("  BRCA1. ").norm, "brca1");
    }

    #[test]
    fn collapses_internal_whitespace() {
        assert_eq!(normalize("Type  2 Diabetes").norm, "type 2 diabetes");
    }

    #[test]
    fn quoted_and_bracketed() {
        assert_eq!(normalize("\"(p53)\"").norm, "p53");
        assert_eq!(normalize("[ TNF-alpha ]").norm, "tnf-alpha");
    }

    #[test]
    fn pure_punctuation_yields_empty() {
        assert_eq!(normalize(" .,;: ").norm, "");
        assert_eq!(normalize("").norm, "");
    }

    #[test]
    fn internal_punctuation_preserved() {
        assert_eq!(normalize("non-small cell").norm, "non-small cell");
        assert_eq!(normalize("IL-6, ").norm, "il-6");
    }

    proptest! {
        #[test]
        fn idempotent(raw in ".*") {
            let once = normalize(&raw);
            let twice = normalize(&once.norm);
            prop_assert_eq!(&once.norm, &twice.norm);
        }

        #[test]
        fn norm_has_clean_edges(raw in ".*") {
            let n = normalize(&raw).norm;
            if let (Some(first), Some(last)) = (n.chars().next(), n.chars().last()) {
                prop_assert!(!first.is_whitespace() && !EDGE_PUNCT.contains(&first));
                prop_assert!(!last.is_whitespace() && !EDGE_PUNCT.contains(&last));
            }
        }
    }
}
