//! Parsing of raw model completions into structured answers.

use crate::data::{normalize, NormalizedPhrase, Vote};

/// Removes `<think>...</think>` reasoning traces. An unterminated
/// `<think>` drops everything from the opening tag onward.
pub fn strip_think_blocks(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(start) = rest.find("<think>") {
        out.push_str(&rest[..start]);
        match rest[start..].find("</think>") {
            Some(close) => rest = &rest[start + close + "</think>".len()..],
            None => return out,
        }
    }
    out.push_str(rest);
    out
}

/// Extracts a yes/no vote: the first standalone token equal to "yes" or
/// "no" (after think-block stripping and casefolding) wins. When neither
/// appears the parse is marked failed and the vote defaults to No, so an
/// abstention can never push a tie toward Yes.
pub fn parse_yesno(raw: &str) -> (Vote, bool) {
    let cleaned = strip_think_blocks(raw).to_lowercase();
    for token in cleaned.split(|c: char| !c.is_alphanumeric()) {
        match token {
            "yes" => return (Vote::Yes, true),
            "no" => return (Vote::No, true),
            _ => {}
        }
    }
    (Vote::No, false)
}

/// Splits a completion into answer phrases: comma/newline separation,
/// normalization, empty and duplicate norms dropped (first occurrence
/// kept). A completion whose sole token is "empty" means no answer.
///
/// When `ranked`, each phrase gets score `1/position` over the retained
/// sequence (1-based); otherwise every phrase scores 1.
pub fn parse_items(raw: &str, ranked: bool) -> Vec<(NormalizedPhrase, f64)> {
    let cleaned = strip_think_blocks(raw);
    let mut items: Vec<NormalizedPhrase> = Vec::new();
    for piece in cleaned.split([',', '\n']) {
        let phrase = normalize(piece.trim());
        if phrase.norm.is_empty() {
            continue;
        }
        if items.iter().any(|p| p.norm == phrase.norm) {
            continue;
        }
        items.push(phrase);
    }
    if items.len() == 1 && items[0].norm == "empty" {
        return Vec::new();
    }
    items
        .into_iter()
        .enumerate()
        .map(|(i, phrase)| {
            let score = if ranked { 1.0 / (i as f64 + 1.0) } else { 1.0 };
            (phrase, score)
        })
        .collect()
}
