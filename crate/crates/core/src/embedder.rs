//! Prompt embedding providers.
//!
//! The engine never runs a language model itself. A [`PromptEmbedder`]
//! turns prompt text into a vector in the category-description space,
//! either from a fixture table or from a remote HTTP endpoint.

use std::collections::HashMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum EmbedderError {
    #[error("embedder unavailable: {0}")]
    Unavailable(String),
    #[error("embedder returned an invalid vector: {0}")]
    InvalidVector(String),
    #[error("cannot load prompt fixture: {0}")]
    Fixture(String),
}

pub trait PromptEmbedder<T: Scalar>: Send + Sync {
    fn embed(&self, prompt: &str) -> Result<Vec<T>, EmbedderError>;
}

fn check_vector<T: Scalar>(v: &[T]) -> Result<(), EmbedderError> {
    if v.is_empty() {
        return Err(EmbedderError::InvalidVector("empty".into()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(EmbedderError::InvalidVector("non-finite component".into()));
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(EmbedderError::InvalidVector("zero norm".into()));
    }
    Ok(())
}

/// Exact-string lookup table, loaded from a JSON object `{prompt: [..]}`.
#[derive(Debug, Clone, Default)]
pub struct FixtureEmbedder<T> {
    table: HashMap<String, Vec<T>>,
}

impl<T: Scalar> FixtureEmbedder<T> {
    pub fn new(table: HashMap<String, Vec<T>>) -> Result<Self, EmbedderError> {
        for (prompt, v) in &table {
            check_vector(v).map_err(|e| EmbedderError::Fixture(format!("`{prompt}`: {e}")))?;
        }
        Ok(Self { table })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EmbedderError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| EmbedderError::Fixture(format!("{}: {e}", path.display())))?;
        let raw: HashMap<String, Vec<f64>> = serde_json::from_str(&text)
            .map_err(|e| EmbedderError::Fixture(format!("{}: {e}", path.display())))?;
        let table = raw
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().map(T::of).collect()))
            .collect();
        Self::new(table)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl<T: Scalar> PromptEmbedder<T> for FixtureEmbedder<T> {
    fn embed(&self, prompt: &str) -> Result<Vec<T>, EmbedderError> {
        self.table
            .get(prompt)
            .cloned()
            .ok_or_else(|| EmbedderError::Unavailable(format!("no fixture vector for prompt `{prompt}`")))
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    text: &'a str,
}

#[derive(Deserialize)]
struct EmbedResponse {
    vector: Vec<f64>,
}

/// Blocking HTTP client: `POST url` with `{"text": ..}`, expects `{"vector": [..]}`.
///
/// Must not be called from inside an async runtime worker; the service
/// runs recommendations on the blocking pool.
pub struct RemoteEmbedder {
    url: String,
    client: reqwest::blocking::Client,
}

impl RemoteEmbedder {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Result<Self, EmbedderError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| EmbedderError::Unavailable(e.to_string()))?;
        Ok(Self {
            url: url.into(),
            client,
        })
    }

    pub fn url(&self) -> &str {
        &self.url
    }
}

impl<T: Scalar> PromptEmbedder<T> for RemoteEmbedder {
    fn embed(&self, prompt: &str) -> Result<Vec<T>, EmbedderError> {
        let resp = self
            .client
            .post(&self.url)
            .json(&EmbedRequest { text: prompt })
            .send()
            .and_then(|r| r.error_for_status())
            .map_err(|e| EmbedderError::Unavailable(e.to_string()))?;
        let body: EmbedResponse = resp
            .json()
            .map_err(|e| EmbedderError::InvalidVector(e.to_string()))?;
        let v: Vec<T> = body.vector.into_iter().map(T::of).collect();
        check_vector(&v)?;
        Ok(v)
    }
}
