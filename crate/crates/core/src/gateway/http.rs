//! Blocking HTTP client with retry for chat-completion and embedding
//! endpoints.
//!
//! Transient transport failures (timeouts, refused connections) are
//! retried up to `max_retries` times with exponential backoff; non-2xx
//! statuses are protocol errors and are not retried.

use std::time::Duration;

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct HttpClient {
    agent: ureq::Agent,
    pub max_retries: u32,
    pub backoff_base: Duration,
}

impl Default for HttpClient {
    fn default() -> Self {
        Self::new()
    }
}

impl HttpClient {
    pub fn new() -> Self {
        Self::with_backoff(3, Duration::from_secs(1))
    }

    /// `max_retries` extra attempts after the first, sleeping
    /// `backoff_base * 2^attempt` between attempts (1s, 2s, 4s at the
    /// defaults).
    pub fn with_backoff(max_retries: u32, backoff_base: Duration) -> Self {
        Self {
            agent: ureq::Agent::new_with_defaults(),
            max_retries,
            backoff_base,
        }
    }

    /// POSTs a JSON body and parses the JSON response. `label` names the
    /// calling model in errors.
    pub fn post_json(
        &self,
        label: &str,
        url: &str,
        api_key: Option<&str>,
        body: &Value,
        timeout: Duration,
    ) -> Result<Value> {
        let mut attempt = 0;
        loop {
            match self.try_post(url, api_key, body, timeout) {
                Ok(v) => return Ok(v),
                Err(ureq::Error::StatusCode(status)) => {
                    return Err(Error::Protocol {
                        model: label.to_string(),
                        status,
                    });
                }
                Err(transient) => {
                    if attempt >= self.max_retries {
                        return Err(Error::Transport {
                            model: label.to_string(),
                            detail: format!("{transient} (after {attempt} retries)"),
                        });
                    }
                    std::thread::sleep(self.backoff_base * 2u32.pow(attempt));
                    attempt += 1;
                }
            }
        }
    }

    fn try_post(
        &self,
        url: &str,
        api_key: Option<&str>,
        body: &Value,
        timeout: Duration,
    ) -> std::result::Result<Value, ureq::Error> {
        let mut request = self
            .agent
            .post(url)
            .config()
            .timeout_global(Some(timeout))
            .build();
        if let Some(key) = api_key {
            request = request.header("Authorization", format!("Bearer {key}"));
        }
        let mut response = request.send_json(body)?;
        response.body_mut().read_json()
    }
}

/// Environment-variable name for overriding a model's endpoint or key:
/// roster name uppercased with non-alphanumerics mapped to underscores.
pub fn env_var_suffix(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_uppercase()
            } else {
                '_'
            }
        })
        .collect()
}
