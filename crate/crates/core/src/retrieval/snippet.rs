//! Snippet extraction: the sentence of an abstract most similar to the
//! question under the configured embedder.

use crate::data::{Document, Question, Snippet};
use crate::error::{Error, Result};
use crate::gateway::{cosine, Embedder};

/// Splits text into sentence spans of character offsets `[begin, end)`.
///
/// A sentence ends at `.`, `!`, or `?` followed by whitespace and an
/// uppercase letter, or at end of text. Spans are trimmed of surrounding
/// whitespace; empty spans are dropped.
pub fn split_sentences(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            let boundary = j > i + 1 && j < chars.len() && chars[j].is_uppercase();
            if boundary {
                push_trimmed(&chars, start, i + 1, &mut spans);
                start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    push_trimmed(&chars, start, chars.len(), &mut spans);
    spans
}

fn push_trimmed(chars: &[char], begin: usize, end: usize, spans: &mut Vec<(usize, usize)>) {
    let mut b = begin;
    let mut e = end;
    while b < e && chars[b].is_whitespace() {
        b += 1;
    }
    while e > b && chars[e - 1].is_whitespace() {
        e -= 1;
    }
    if b < e {
        spans.push((b, e));
    }
}

/// Extracts the sentence of `doc`'s abstract most cosine-similar to the
/// question (ties keep the earliest sentence). Errors on empty abstracts
/// so callers can skip the document.
pub fn extract_snippet(
    question: &Question,
    doc: &Document,
    embedder: &Embedder,
) -> Result<Snippet> {
    let spans = split_sentences(&doc.abstract_text);
    if spans.is_empty() {
        return Err(Error::NoSnippet {
            doc_id: doc.doc_id.clone(),
        });
    }
    let chars: Vec<char> = doc.abstract_text.chars().collect();
    let sentences: Vec<String> = spans
        .iter()
        .map(|(b, e)| chars[*b..*e].iter().collect())
        .collect();

    let mut texts = Vec::with_capacity(sentences.len() + 1);
    texts.push(question.body.clone());
    texts.extend(sentences.iter().cloned());
    let vectors = embedder.embed(&texts)?;
    let (question_vec, sentence_vecs) = vectors.split_first().expect("non-empty batch");

    let mut best = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    for (i, v) in sentence_vecs.iter().enumerate() {
        let score = cosine(question_vec, v);
        if score > best_score {
            best_score = score;
            best = i;
        }
    }
    let (begin, end) = spans[best];
    Ok(Snippet {
        doc_id: doc.doc_id.clone(),
        text: sentences[best].clone(),
        begin_offset: begin,
        end_offset: end,
        score: best_score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::QuestionType;
    use proptest::prelude::*;

    fn question(body: &str) -> Question {
        Question {
            id: "q".into(),
            body: body.into(),
            qtype: QuestionType::Summary,
            gold: None,
            gold_documents: vec![],
            gold_snippets: vec![],
            round_id: None,
        }
    }

    fn doc(text: &str) -> Document {
        Document {
            doc_id: "d1".into(),
            title: String::new(),
            abstract_text: text.into(),
        }
    }

    #[test]
    fn splits_on_terminator_whitespace_uppercase() {
        let spans = split_sentences("First sentence. Second one! Third? The end.");
        assert_eq!(spans.len(), 4);
        let text = "First sentence. Second one! Third? The end.";
        let chars: Vec<char> = text.chars().collect();
        let s: Vec<String> = spans
            .iter()
            .map(|(b, e)| chars[*b..*e].iter().collect())
            .collect();
        assert_eq!(
            s,
            vec!["First sentence.", "Second one!", "Third?", "The end."]
        );
    }

    #[test]
    fn abbreviation_followed_by_lowercase_does_not_split() {
        let spans = split_sentences("Approx. values are shown. Next sentence.");
        assert_eq!(spans.len(), 2);
    }

    #[test]
    fn single_sentence_abstract_returns_whole_span() {
        let embedder = Embedder::default();
        let snippet = extract_snippet(
            &question("anything"),
            &doc("Only one sentence here"),
            &embedder,
        )
        .unwrap();
        assert_eq!(snippet.begin_offset, 0);
        assert_eq!(snippet.end_offset, "Only one sentence here".chars().count());
        assert_eq!(snippet.text, "Only one sentence here");
    }

    #[test]
    fn sentence_repeating_question_wins() {
        let embedder = Embedder::default();
        let q = "does aspirin reduce fever";
        let text = "Unrelated filler about zebrafish. Does aspirin reduce fever.";
        let snippet = extract_snippet(&question(q), &doc(text), &embedder).unwrap();
        assert_eq!(snippet.text, "Does aspirin reduce fever.");
    }

    #[test]
    fn empty_abstract_is_no_snippet_error() {
        let embedder = Embedder::default();
        let err = extract_snippet(&question("q"), &doc(""), &embedder).unwrap_err();
        assert!(matches!(err, Error::NoSnippet { .. }));
    }

    proptest! {
        /// Snippet text always equals the abstract substring at its offsets.
        #[test]
        fn offsets_substring_verify(text in "[A-Za-z .!?]{1,120}", q in "[a-z ]{1,20}") {
            let embedder = Embedder::default();
            let d = doc(&text);
            if let Ok(snippet) = extract_snippet(&question(&q), &d, &embedder) {
                prop_assert!(snippet.offsets_verify(&d.abstract_text));
            }
        }
    }
}
