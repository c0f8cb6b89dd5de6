//! Font-pair recommendation from a text prompt.
//!
//! The engine maps a prompt to the nearest style categories, ranks heading
//! fonts by how many of those categories they carry, and pairs each sampled
//! heading with a thinner subheading whose visual embedding is neither too
//! similar nor too different.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the precision used by the service.

pub mod blocklist;
pub mod catalog;
pub mod config;
pub mod embedder;
pub mod embedding;
pub mod engine;
pub mod glyph;
pub mod ingest;
pub mod pairing;
pub mod ranking;
pub mod scalar;

pub use blocklist::{BlockCheck, Blocklist};
pub use catalog::{load_catalog, Catalog, Category, FontRecord};
pub use config::EngineConfig;
pub use embedder::{FixtureEmbedder, PromptEmbedder, RemoteEmbedder};
pub use embedding::{EmbeddingIndex, EmbeddingKind, RetrievedCategory};
pub use engine::{Engine, EngineError, EngineSettings, PairRecommendation, RecommendResponse};
pub use pairing::{PairingConfig, PairingError};
pub use scalar::Scalar;

/// Engine in service precision.
pub type Engine64 = engine::Engine<f64>;
pub type Engine32 = engine::Engine<f32>;
pub type Index = embedding::EmbeddingIndex<f64>;
pub type Recommendation = engine::PairRecommendation<f64>;
pub type Strokes = std::collections::HashMap<String, glyph::StrokeProfile<f64>>;
