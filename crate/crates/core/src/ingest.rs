//! Offline stroke-width pass over a catalog.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::{load_catalog, Catalog, CatalogError};
use crate::embedding::{load_embeddings, EmbeddingError, EmbeddingKind};
use crate::glyph::{font_stroke_profile, write_strokes, GlyphError, StrokeConfig, StrokeProfile};
use crate::scalar::Scalar;

pub const STROKES_FILE: &str = "strokes.jsonl";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Embeddings(#[from] EmbeddingError),
    #[error("embedding file names fonts missing from the catalog: {0:?}")]
    UnknownEmbeddingFonts(Vec<String>),
    #[error("catalog has no fonts")]
    EmptyCatalog,
    #[error("no font could be measured ({0} failures)")]
    AllFailed(usize),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug)]
pub struct IngestReport<T> {
    pub profiles: Vec<StrokeProfile<T>>,
    pub failures: Vec<(String, GlyphError)>,
    /// Fonts with no visual embedding, when an embedding file was checked.
    pub missing_visual: Vec<String>,
    /// Categories with no text embedding, when an embedding file was checked.
    pub missing_category: Vec<String>,
    pub strokes_path: Option<PathBuf>,
}

/// Measures every font in catalog order. Failures are collected, not fatal.
pub fn compute_strokes<T: Scalar>(
    catalog: &Catalog,
    cfg: &StrokeConfig,
) -> (Vec<StrokeProfile<T>>, Vec<(String, GlyphError)>) {
    let results: Vec<_> = catalog
        .fonts
        .par_iter()
        .map(|f| (f.id.clone(), font_stroke_profile::<T>(catalog, f, cfg)))
        .collect();
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (id, r) in results {
        match r {
            Ok(p) => ok.push(p),
            Err(e) => failed.push((id, e)),
        }
    }
    (ok, failed)
}

/// Computes strokes for the catalog at `catalog_path` and writes
/// `strokes.jsonl` into `out_dir`.
pub fn ingest<T: Scalar>(
    catalog_path: &Path,
    out_dir: &Path,
    embeddings_path: Option<&Path>,
    cfg: &StrokeConfig,
) -> Result<IngestReport<T>, IngestError> {
    let catalog = load_catalog(catalog_path)?;
    if catalog.fonts.is_empty() {
        return Err(IngestError::EmptyCatalog);
    }
    let (mut missing_visual, mut missing_category) = (Vec::new(), Vec::new());
    if let Some(path) = embeddings_path {
        let index = load_embeddings::<T>(path)?;
        let unknown: Vec<String> = index
            .records(EmbeddingKind::FontVisual)
            .iter()
            .filter(|r| catalog.font(&r.id).is_none())
            .map(|r| r.id.clone())
            .collect();
        if !unknown.is_empty() {
            return Err(IngestError::UnknownEmbeddingFonts(unknown));
        }
        missing_visual = catalog
            .fonts
            .iter()
            .filter(|f| index.get(EmbeddingKind::FontVisual, &f.id).is_none())
            .map(|f| f.id.clone())
            .collect();
        missing_category = catalog
            .categories
            .iter()
            .filter(|c| index.get(EmbeddingKind::CategoryText, &c.id).is_none())
            .map(|c| c.id.clone())
            .collect();
    }

    let (profiles, failures) = compute_strokes::<T>(&catalog, cfg);
    if profiles.is_empty() {
        return Err(IngestError::AllFailed(failures.len()));
    }
    let write_err = |path: &Path, source| IngestError::Write {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(out_dir).map_err(|e| write_err(out_dir, e))?;
    let strokes_path = out_dir.join(STROKES_FILE);
    std::fs::write(&strokes_path, write_strokes(&profiles)).map_err(|e| write_err(&strokes_path, e))?;

    Ok(IngestReport {
        profiles,
        failures,
        missing_visual,
        missing_category,
        strokes_path: Some(strokes_path),
    })
}
