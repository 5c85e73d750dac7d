//! Table-driven completion for scripted models.

use crate::error::{Error, Result};

use super::ModelSpec;

/// Resolves a prompt against a scripted model's table: among keys
/// contained in the prompt, the longest wins (ties broken
/// lexicographically). A prompt matching no key is a script error.
pub fn complete_scripted(model: &ModelSpec, prompt: &str) -> Result<String> {
    let table = model.script.as_ref().ok_or_else(|| Error::Script {
        model: model.name.clone(),
    })?;
    table
        .iter()
        .filter(|(key, _)| prompt.contains(key.as_str()))
        .max_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .map(|(_, response)| response.clone())
        .ok_or_else(|| Error::Script {
            model: model.name.clone(),
        })
}
