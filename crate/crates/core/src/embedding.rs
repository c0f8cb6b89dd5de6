//! Embedding storage and cosine nearest-category retrieval.
//!
//! Embedding files are JSON lines, one record per line:
//! `{"id": "...", "kind": "category_text" | "font_visual", "vector": [..]}`.
//! Every vector of a kind shares that kind's dimension. Bare `NaN` and
//! `Infinity` tokens (as written by Python's `json` module) are accepted by
//! the reader so that they surface as [`EmbeddingError::NonFiniteVector`]
//! rather than as a parse failure.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    CategoryText,
    FontVisual,
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingKind::CategoryText => "category_text",
            EmbeddingKind::FontVisual => "font_visual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord<T> {
    pub id: String,
    pub kind: EmbeddingKind,
    pub vector: Vec<T>,
}

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{kind} record `{id}` has dimension {found}, expected {expected}")]
    DimensionMismatch {
        kind: EmbeddingKind,
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("record `{0}` has a non-finite component")]
    NonFiniteVector(String),
    #[error("record `{0}` has zero norm")]
    ZeroNormRecord(String),
    #[error("duplicate {kind} record `{id}`")]
    DuplicateId { kind: EmbeddingKind, id: String },
    #[error("vector has zero norm")]
    ZeroNorm,
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("index holds no category vectors")]
    EmptyIndex,
}

/// Embeddings keyed by (kind, id). Insertion order is kept per kind.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingIndex<T> {
    dims: BTreeMap<EmbeddingKind, usize>,
    records: BTreeMap<EmbeddingKind, Vec<EmbeddingRecord<T>>>,
    lookup: HashMap<EmbeddingKind, HashMap<String, usize>>,
}

impl<T: Scalar> EmbeddingIndex<T> {
    pub fn new() -> Self {
        Self {
            dims: BTreeMap::new(),
            records: BTreeMap::new(),
            lookup: HashMap::new(),
        }
    }

    /// Adds a record after checking finiteness, norm, dimension and id uniqueness.
    pub fn insert(&mut self, record: EmbeddingRecord<T>) -> Result<(), EmbeddingError> {
        if record.vector.iter().any(|v| !v.is_finite()) {
            return Err(EmbeddingError::NonFiniteVector(record.id));
        }
        if norm(&record.vector) <= T::zero() {
            return Err(EmbeddingError::ZeroNormRecord(record.id));
        }
        let expected = *self.dims.entry(record.kind).or_insert(record.vector.len());
        if expected != record.vector.len() {
            return Err(EmbeddingError::DimensionMismatch {
                kind: record.kind,
                id: record.id,
                expected,
                found: record.vector.len(),
            });
        }
        let ids = self.lookup.entry(record.kind).or_default();
        if ids.contains_key(&record.id) {
            return Err(EmbeddingError::DuplicateId {
                kind: record.kind,
                id: record.id,
            });
        }
        let slot = self.records.entry(record.kind).or_default();
        ids.insert(record.id.clone(), slot.len());
        slot.push(record);
        Ok(())
    }

    pub fn dim(&self, kind: EmbeddingKind) -> Option<usize> {
        self.dims.get(&kind).copied()
    }

    pub fn get(&self, kind: EmbeddingKind, id: &str) -> Option<&[T]> {
        let idx = *self.lookup.get(&kind)?.get(id)?;
        Some(&self.records[&kind][idx].vector)
    }

    pub fn records(&self, kind: EmbeddingKind) -> &[EmbeddingRecord<T>] {
        self.records.get(&kind).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.lookup.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.lookup.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for recs in self.records.values() {
            for r in recs {
                out.push_str(&serde_json::to_string(r).expect("record serializes"));
                out.push('\n');
            }
        }
        out
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Component {
    Num(f64),
    Token(String),
}

impl Component {
    fn value(&self) -> Result<f64, String> {
        match self {
            Component::Num(v) => Ok(*v),
            Component::Token(t) => match t.as_str() {
                "NaN" | "nan" => Ok(f64::NAN),
                "Infinity" | "inf" => Ok(f64::INFINITY),
                "-Infinity" | "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(format!("non-numeric component `{other}`")),
            },
        }
    }
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    kind: EmbeddingKind,
    vector: Vec<Component>,
}

/// Quotes bare `NaN` / `Infinity` / `-Infinity` tokens outside of strings.
fn quote_nonfinite_tokens(line: &str) -> String {
    let mut out = String::with_capacity(line.len() + 8);
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = line;
    while let Some(c) = rest.chars().next() {
        if in_string {
            out.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '"' {
            in_string = true;
        }
        let token = ["-Infinity", "Infinity", "NaN"]
            .into_iter()
            .find(|t| rest.starts_with(t));
        match token {
            Some(t) => {
                out.push('"');
                out.push_str(t);
                out.push('"');
                rest = &rest[t.len()..];
            }
            None => {
                out.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    out
}

fn parse_line(line: &str, lineno: usize) -> Result<RawRecord, EmbeddingError> {
    serde_json::from_str::<RawRecord>(line)
        .or_else(|first| {
            let patched = quote_nonfinite_tokens(line);
            if patched == line {
                return Err(first);
            }
            serde_json::from_str::<RawRecord>(&patched).map_err(|_| first)
        })
        .map_err(|e| EmbeddingError::Parse {
            line: lineno,
            message: e.to_string(),
        })
}

/// Parses JSON-lines embedding text. Blank lines are skipped.
pub fn parse_embeddings<T: Scalar>(text: &str) -> Result<EmbeddingIndex<T>, EmbeddingError> {
    let mut index = EmbeddingIndex::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw = parse_line(line, i + 1)?;
        let mut vector = Vec::with_capacity(raw.vector.len());
        for c in &raw.vector {
            let v = c.value().map_err(|message| EmbeddingError::Parse {
                line: i + 1,
                message,
            })?;
            // f64 -> f32 overflow yields infinity and is rejected by insert
            vector.push(T::from_f64(v).unwrap_or_else(T::nan));
        }
        index.insert(EmbeddingRecord {
            id: raw.id,
            kind: raw.kind,
            vector,
        })?;
    }
    Ok(index)
}

pub fn load_embeddings<T: Scalar>(path: impl AsRef<Path>) -> Result<EmbeddingIndex<T>, EmbeddingError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| EmbeddingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_embeddings(&text)
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Cosine of the angle between `a` and `b`, clamped to [-1, 1].
pub fn cosine_similarity<T: Scalar>(a: &[T], b: &[T]) -> Result<T, EmbeddingError> {
    if a.len() != b.len() {
        return Err(EmbeddingError::LengthMismatch(a.len(), b.len()));
    }
    let denom = norm(a) * norm(b);
    if denom <= T::zero() {
        return Err(EmbeddingError::ZeroNorm);
    }
    Ok((dot(a, b) / denom).max(-T::one()).min(T::one()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievedCategory<T> {
    pub category_id: String,
    pub score: T,
    /// 1-based.
    pub rank: usize,
}

/// The `k` categories most cosine-similar to `query`, best first.
///
/// Exhaustive scan; equal scores are ordered by category id.
pub fn knn_top_categories<T: Scalar>(
    index: &EmbeddingIndex<T>,
    query: &[T],
    k: usize,
) -> Result<Vec<RetrievedCategory<T>>, EmbeddingError> {
    let categories = index.records(EmbeddingKind::CategoryText);
    if categories.is_empty() {
        return Err(EmbeddingError::EmptyIndex);
    }
    let dim = index.dim(EmbeddingKind::CategoryText).unwrap_or(0);
    if query.len() != dim {
        return Err(EmbeddingError::DimensionMismatch {
            kind: EmbeddingKind::CategoryText,
            id: "<query>".into(),
            expected: dim,
            found: query.len(),
        });
    }
    let query_norm = norm(query);
    if query_norm <= T::zero() {
        return Err(EmbeddingError::ZeroNorm);
    }
    let mut scored: Vec<(&str, T)> = categories
        .iter()
        .map(|r| {
            let cos = dot(query, &r.vector) / (query_norm * norm(&r.vector));
            (r.id.as_str(), cos.max(-T::one()).min(T::one()))
        })
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });
    Ok(scored
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (id, score))| RetrievedCategory {
            category_id: id.to_string(),
            score,
            rank: i + 1,
        })
        .collect())
}
