//! End-to-end recommendation pipeline.
//!
//! prompt → blocklist → prompt embedding → top-k categories → heading
//! ranking → stratified heading sample → best subheading per heading.
//!
//! All indices are loaded once and never mutated, so one [`Engine`] can
//! serve any number of concurrent requests.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocklist::{BlockCheck, Blocklist};
use crate::catalog::{load_catalog, Catalog};
use crate::config::{EmbedderConfig, EngineConfig};
use crate::embedder::{EmbedderError, FixtureEmbedder, PromptEmbedder, RemoteEmbedder};
use crate::embedding::{knn_top_categories, load_embeddings, EmbeddingError, EmbeddingIndex, RetrievedCategory};
use crate::glyph::{load_strokes, StrokeProfile};
use crate::pairing::{pair_fonts, pair_fonts_detailed, PairingConfig, PairingError, PairingOutcome};
use crate::ranking::{rank_heading_fonts, stratified_sample, SampleOptions};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cannot initialize from {path}: {message}")]
    Init { path: PathBuf, message: String },
    #[error("prompt is empty")]
    EmptyPrompt,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("prompt contains blocked term `{0}`")]
    BlockedPrompt(String),
    #[error("prompt embedder unavailable: {0}")]
    EmbedderUnavailable(String),
    #[error("no catalog font carries any of the categories {0:?}")]
    NoFontsForCategories(Vec<String>),
    #[error("no subheading candidates: {0}")]
    NoCandidates(String),
    #[error("unknown font `{0}`")]
    UnknownFont(String),
    #[error(transparent)]
    Retrieval(#[from] EmbeddingError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

impl EngineError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::Init { .. } => "init_error",
            EngineError::EmptyPrompt | EngineError::InvalidRequest(_) => "malformed_request",
            EngineError::BlockedPrompt(_) => "blocked_prompt",
            EngineError::EmbedderUnavailable(_) => "embedder_unavailable",
            EngineError::NoFontsForCategories(_) => "no_fonts_for_categories",
            EngineError::NoCandidates(_) => "no_candidates",
            EngineError::UnknownFont(_) => "unknown_font",
            EngineError::Retrieval(_) => "retrieval_error",
            EngineError::Pairing(_) => "pairing_error",
        }
    }
}

impl From<EmbedderError> for EngineError {
    fn from(e: EmbedderError) -> Self {
        EngineError::EmbedderUnavailable(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecommendation<T> {
    pub heading_font_id: String,
    pub subheading_font_id: String,
    pub categories: Vec<RetrievedCategory<T>>,
    pub heading_combo: BTreeSet<String>,
    pub balanced_score: T,
}

/// Request-independent knobs of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineSettings {
    pub k_categories: usize,
    pub pairing: PairingConfig,
    pub sample_seed: Option<u64>,
    pub distinct_families: bool,
}

impl Default for EngineSettings {
    fn default() -> Self {
        Self {
            k_categories: 3,
            pairing: PairingConfig::default(),
            sample_seed: None,
            distinct_families: false,
        }
    }
}

pub struct Engine<T: Scalar> {
    catalog: Catalog,
    index: EmbeddingIndex<T>,
    strokes: HashMap<String, StrokeProfile<T>>,
    embedder: Box<dyn PromptEmbedder<T>>,
    blocklist: Blocklist,
    settings: EngineSettings,
}

fn init_err(path: &std::path::Path, e: impl ToString) -> EngineError {
    EngineError::Init {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

impl<T: Scalar> Engine<T> {
    pub fn new(
        catalog: Catalog,
        index: EmbeddingIndex<T>,
        strokes: HashMap<String, StrokeProfile<T>>,
        embedder: Box<dyn PromptEmbedder<T>>,
        blocklist: Blocklist,
        settings: EngineSettings,
    ) -> Self {
        Self {
            catalog,
            index,
            strokes,
            embedder,
            blocklist,
            settings,
        }
    }

    /// Loads every artifact named by `cfg`.
    ///
    /// A remote embedder builds a blocking HTTP client; call this outside
    /// of any async runtime.
    pub fn from_config(cfg: &EngineConfig) -> Result<Self, EngineError> {
        let catalog = load_catalog(&cfg.catalog_path).map_err(|e| init_err(&cfg.catalog_path, e))?;
        let index = load_embeddings(&cfg.embeddings_path).map_err(|e| init_err(&cfg.embeddings_path, e))?;
        let strokes = load_strokes(&cfg.strokes_path).map_err(|e| init_err(&cfg.strokes_path, e))?;
        let embedder: Box<dyn PromptEmbedder<T>> = match &cfg.prompt_embedder {
            EmbedderConfig::Fixture(path) => {
                Box::new(FixtureEmbedder::<T>::load(path).map_err(|e| init_err(path, e))?)
            }
            EmbedderConfig::Remote(url) => Box::new(
                RemoteEmbedder::new(url.clone(), Duration::from_millis(cfg.embedder_timeout_ms))
                    .map_err(|e| init_err(std::path::Path::new(url), e))?,
            ),
        };
        let blocklist = match &cfg.blocklist_path {
            Some(p) => Blocklist::load(p).map_err(|e| init_err(p, e))?,
            None => Blocklist::default(),
        };
        let settings = EngineSettings {
            k_categories: cfg.k_categories,
            pairing: cfg.pairing.clone(),
            sample_seed: cfg.sample_seed,
            distinct_families: cfg.distinct_families,
        };
        Ok(Self::new(catalog, index, strokes, embedder, blocklist, settings))
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn embeddings(&self) -> &EmbeddingIndex<T> {
        &self.index
    }

    pub fn strokes(&self) -> &HashMap<String, StrokeProfile<T>> {
        &self.strokes
    }

    pub fn settings(&self) -> &EngineSettings {
        &self.settings
    }

    pub fn font_count(&self) -> usize {
        self.catalog.fonts.len()
    }

    /// Full pipeline for a text prompt. `seed` overrides the configured sample seed.
    pub fn recommend(
        &self,
        prompt: &str,
        n_pairs: usize,
        seed: Option<u64>,
    ) -> Result<Vec<PairRecommendation<T>>, EngineError> {
        let prompt = prompt.trim();
        if prompt.is_empty() {
            return Err(EngineError::EmptyPrompt);
        }
        if n_pairs == 0 {
            return Err(EngineError::InvalidRequest("n_pairs must be at least 1".into()));
        }
        if let BlockCheck::Blocked(term) = self.blocklist.check(prompt) {
            return Err(EngineError::BlockedPrompt(term));
        }
        let query = self.embedder.embed(prompt)?;
        self.recommend_for_vector(&query, n_pairs, seed)
    }

    /// Everything after prompt embedding.
    pub fn recommend_for_vector(
        &self,
        query: &[T],
        n_pairs: usize,
        seed: Option<u64>,
    ) -> Result<Vec<PairRecommendation<T>>, EngineError> {
        if n_pairs == 0 {
            return Err(EngineError::InvalidRequest("n_pairs must be at least 1".into()));
        }
        let categories = knn_top_categories(&self.index, query, self.settings.k_categories)?;
        let ranking = rank_heading_fonts(&self.catalog, &categories).expect("knn returns at least one category");
        if ranking.fonts.is_empty() {
            return Err(EngineError::NoFontsForCategories(
                categories.iter().map(|c| c.category_id.clone()).collect(),
            ));
        }
        let headings = stratified_sample(
            &ranking,
            &SampleOptions {
                max_per_group: 1,
                seed: seed.or(self.settings.sample_seed),
                distinct_families: self.settings.distinct_families,
            },
        );

        let mut pairs = Vec::new();
        let mut skipped = Vec::new();
        for heading in &headings {
            if pairs.len() == n_pairs {
                break;
            }
            let pool = self.pool_for(heading);
            match pair_fonts(heading, &pool, &self.strokes, &self.index, &self.settings.pairing, 1) {
                Ok(mut picks) if !picks.is_empty() => {
                    let (sub, score) = picks.remove(0);
                    pairs.push(PairRecommendation {
                        heading_font_id: heading.clone(),
                        subheading_font_id: sub,
                        categories: categories.clone(),
                        heading_combo: ranking.combo_of(heading).cloned().unwrap_or_default(),
                        balanced_score: score,
                    });
                }
                // per-font problems skip the heading; the request fails only if nothing pairs
                Ok(_)
                | Err(PairingError::NoCandidates(_))
                | Err(PairingError::MissingStroke(_))
                | Err(PairingError::MissingEmbedding(_)) => skipped.push(heading.clone()),
                Err(e) => return Err(e.into()),
            }
        }
        if pairs.is_empty() {
            return Err(EngineError::NoCandidates(format!(
                "no heading could be paired (tried {})",
                skipped.join(", ")
            )));
        }
        Ok(pairs)
    }

    /// Subheading candidates for `heading`: the whole catalog minus the heading
    /// (and minus its family when configured).
    fn pool_for(&self, heading: &str) -> Vec<&str> {
        let family = if self.settings.pairing.exclude_heading_family {
            self.catalog.font(heading).map(|f| f.family.as_str())
        } else {
            None
        };
        self.catalog
            .fonts
            .iter()
            .filter(|f| f.id != heading && Some(f.family.as_str()) != family)
            .map(|f| f.id.as_str())
            .collect()
    }

    /// Complete scoring table for one heading, for inspection.
    pub fn pair_table(&self, heading: &str, n: usize) -> Result<PairingOutcome<T>, EngineError> {
        if self.catalog.font(heading).is_none() {
            return Err(EngineError::UnknownFont(heading.to_string()));
        }
        let pool = self.pool_for(heading);
        Ok(pair_fonts_detailed(
            heading,
            &pool,
            &self.strokes,
            &self.index,
            &self.settings.pairing,
            n,
        )?)
    }
}

/// Wire form of a category in a response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryScore {
    pub id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDto {
    pub heading_font_id: String,
    pub subheading_font_id: String,
    pub categories: Vec<CategoryScore>,
    pub balanced_score: f64,
}

/// Body of a successful recommendation response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendResponse {
    pub pairs: Vec<PairDto>,
}

impl RecommendResponse {
    pub fn from_pairs<T: Scalar>(pairs: &[PairRecommendation<T>]) -> Self {
        Self {
            pairs: pairs
                .iter()
                .map(|p| PairDto {
                    heading_font_id: p.heading_font_id.clone(),
                    subheading_font_id: p.subheading_font_id.clone(),
                    categories: p
                        .categories
                        .iter()
                        .map(|c| CategoryScore {
                            id: c.category_id.clone(),
                            score: c.score.as_f64(),
                        })
                        .collect(),
                    balanced_score: p.balanced_score.as_f64(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("response serializes")
    }
}
