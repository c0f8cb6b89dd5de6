//! Engine configuration file (TOML).
//!
//! ```toml
//! catalog_path = "catalog.json"
//! embeddings_path = "embeddings.jsonl"
//! strokes_path = "strokes.jsonl"
//! prompt_embedder = { fixture = "prompts.json" }   # or { remote = "http://host/embed" }
//! k_categories = 3
//! blocklist_path = "blocklist.txt"
//! sample_seed = 7
//!
//! [pairing]
//! stroke_coefficient = 0.8
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glyph::StrokeConfig;
use crate::pairing::PairingConfig;

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "FONTPAIR_CONFIG";
pub const DEFAULT_CONFIG_FILE: &str = "fontpair.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedderConfig {
    Fixture(PathBuf),
    Remote(String),
}

fn default_k() -> usize {
    3
}

fn default_timeout_ms() -> u64 {
    5_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub catalog_path: PathBuf,
    pub embeddings_path: PathBuf,
    pub strokes_path: PathBuf,
    pub prompt_embedder: EmbedderConfig,
    #[serde(default = "default_k")]
    pub k_categories: usize,
    #[serde(default)]
    pub pairing: PairingConfig,
    #[serde(default)]
    pub stroke: StrokeConfig,
    #[serde(default)]
    pub blocklist_path: Option<PathBuf>,
    #[serde(default)]
    pub sample_seed: Option<u64>,
    /// Sample at most one heading per font family.
    #[serde(default)]
    pub distinct_families: bool,
    #[serde(default = "default_timeout_ms")]
    pub embedder_timeout_ms: u64,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl EngineConfig {
    pub fn from_toml_str(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg: EngineConfig = toml::from_str(text)?;
        if let Some(base) = base {
            cfg.resolve_paths(base);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k_categories == 0 {
            return Err(ConfigError::Invalid("k_categories must be at least 1".into()));
        }
        self.pairing
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.catalog_path);
        fix(&mut self.embeddings_path);
        fix(&mut self.strokes_path);
        if let Some(p) = self.blocklist_path.as_mut() {
            fix(p);
        }
        if let EmbedderConfig::Fixture(p) = &mut self.prompt_embedder {
            fix(p);
        }
    }
}

/// Picks the config path: explicit flag, then `FONTPAIR_CONFIG`, then `fontpair.toml`.
pub fn config_path(flag: Option<&Path>, env: Option<&str>) -> PathBuf {
    match (flag, env) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(e)) if !e.is_empty() => PathBuf::from(e),
        _ => PathBuf::from(DEFAULT_CONFIG_FILE),
    }
}
