//! Phase-B answer export: exact answers shaped per question type plus
//! optional ideal answers.

use serde_json::{json, Value};

use crate::data::Question;

use super::FinalAnswer;

/// Serializes final answers as Phase-B JSON. Exact answer shapes:
/// yes/no as a `"yes"`/`"no"` string, factoid as a list of strings,
/// list as a list of single-member synonym groups; summary questions get
/// only an `ideal_answer`.
pub fn phase_b_json(answers: &[(&Question, FinalAnswer)]) -> Value {
    let questions: Vec<Value> = answers
        .iter()
        .map(|(question, answer)| {
            let mut obj = json!({
                "id": question.id,
                "type": question.qtype.as_str(),
            });
            let map = obj.as_object_mut().expect("object");
            match answer {
                FinalAnswer::YesNo(vote) => {
                    map.insert("exact_answer".into(), json!(vote.as_str()));
                }
                FinalAnswer::Factoid(phrases) => {
                    let items: Vec<&str> = phrases.iter().map(|p| p.raw.as_str()).collect();
                    map.insert("exact_answer".into(), json!(items));
                }
                FinalAnswer::List(phrases) => {
                    let items: Vec<Vec<&str>> =
                        phrases.iter().map(|p| vec![p.raw.as_str()]).collect();
                    map.insert("exact_answer".into(), json!(items));
                }
                FinalAnswer::Ideal(text) => {
                    map.insert("ideal_answer".into(), json!(text));
                }
            }
            obj
        })
        .collect();
    json!({ "questions": questions })
}
