//! The four prompt templates, one per question type.
//!
//! Template text is fixed; `%s` placeholders receive the context and the
//! question, in that order. Tests checksum these constants, so any change
//! here is a deliberate contract change.

use crate::data::QuestionType;

pub const YESNO_TEMPLATE: &str = "Given only the following INFORMATION and QUESTION, answer the QUESTION only with \"Yes\" or \"No\". Think carefully. INFORMATION: %s QUESTION: %s";

pub const LIST_TEMPLATE: &str = "Answer the QUESTION using only the TEXT by only returning a list of entity names, numbers, or similar short expressions that are an answer to the question and are separated by commas. Only the list should be returned. If you do not know any answer return the word EMPTY. TEXT: %s QUESTION: %s";

pub const FACTOID_TEMPLATE: &str = "Answer the QUESTION using only the TEXT by only returning a list of entity names, numbers, or similar short expressions that are an answer to the question and are separated by commas,ordered by decreasing confidence. Only the list should be returned. If you do not know any answer return the word EMPTY. TEXT: %s QUESTION: %s";

pub const SUMMARY_TEMPLATE: &str = "##ABSTRACT: %s ##QUESTION: %s ##TASK: Answer the QUESTION by returning a single paragraph sized text ideally summarizing only the most relevant information in the ABSTRACT.";

/// A prompt template bound to its question type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub qtype: QuestionType,
    pub template_text: &'static str,
}

/// The template for a question type.
pub fn template_for(qtype: QuestionType) -> PromptTemplate {
    let template_text = match qtype {
        QuestionType::YesNo => YESNO_TEMPLATE,
        QuestionType::List => LIST_TEMPLATE,
        QuestionType::Factoid => FACTOID_TEMPLATE,
        QuestionType::Summary => SUMMARY_TEMPLATE,
    };
    PromptTemplate {
        qtype,
        template_text,
    }
}

/// Substitutes the two `%s` placeholders with context and question body.
/// Pure placeholder substitution; `%s` occurrences inside the context or
/// question pass through untouched.
pub fn render_prompt(qtype: QuestionType, context: &str, question_body: &str) -> String {
    let template = template_for(qtype).template_text;
    let mut parts = template.splitn(3, "%s");
    let head = parts.next().unwrap_or("");
    let mid = parts.next().unwrap_or("");
    let tail = parts.next().unwrap_or("");
    let mut out = String::with_capacity(template.len() + context.len() + question_body.len());
    out.push_str(head);
    out.push_str(context);
    out.push_str(mid);
    out.push_str(question_body);
    out.push_str(tail);
    out
}
