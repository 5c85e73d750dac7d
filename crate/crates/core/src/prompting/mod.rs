//! Prompt construction and model-output parsing.
//!
//! Builds the question context under one of three strategies (given
//! snippets, top abstracts, or abstracts extended with retrieved
//! documents), renders the per-type prompt templates, and parses raw
//! completions into structured answers. All functions are pure.

mod context;
mod parse;
mod templates;

pub use context::build_context;
pub use parse::{parse_items, parse_yesno, strip_think_blocks};
pub use templates::{
    render_prompt, template_for, PromptTemplate, FACTOID_TEMPLATE, LIST_TEMPLATE, SUMMARY_TEMPLATE,
    YESNO_TEMPLATE,
};

use serde::{Deserialize, Serialize};

/// Which evidence goes into the prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    /// Snippets carried by the question, joined by single blanks.
    Snippets,
    /// Full abstracts of the question's documents.
    Abstracts,
    /// Abstracts plus extra retrieved documents appended after the originals.
    AbstractsExtended,
}

impl StrategyKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "snippets" => Some(Self::Snippets),
            "abstracts" => Some(Self::Abstracts),
            "abstracts_extended" => Some(Self::AbstractsExtended),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Snippets => "snippets",
            Self::Abstracts => "abstracts",
            Self::AbstractsExtended => "abstracts_extended",
        }
    }
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Context strategy plus the document budget applied to abstract contexts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextStrategy {
    pub variant: StrategyKind,
    pub doc_limit: usize,
}

impl ContextStrategy {
    pub fn new(variant: StrategyKind) -> Self {
        Self {
            variant,
            doc_limit: 10,
        }
    }
}

impl Default for ContextStrategy {
    fn default() -> Self {
        Self::new(StrategyKind::Snippets)
    }
}
