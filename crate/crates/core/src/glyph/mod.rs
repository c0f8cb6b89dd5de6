//! Glyph rasterization and stroke-width measurement.
//!
//! The mnemonic string is rendered at a fixed pixel size, binarized, and
//! reduced to a skeleton. Each skeleton pixel's distance to the nearest
//! background pixel gives a local half-width; the font's stroke width is
//! the median over the skeleton.

mod distance;
mod raster;
mod skeleton;
mod stroke;

use std::path::PathBuf;

use thiserror::Error;

use crate::catalog::{Catalog, FontRecord};
use crate::scalar::Scalar;

pub use distance::{distance_transform, DistanceField};
pub use raster::{render_text, GlyphRaster, Mask, CANVAS_MARGIN, MNEMONIC, RENDER_SIZE};
pub use skeleton::skeletonize;
pub use stroke::{load_strokes, parse_strokes, stroke_width, write_strokes, StrokeConfig, StrokeProfile};

#[derive(Debug, Error)]
pub enum GlyphError {
    #[error("font `{0}` has no glyph source")]
    MissingGlyphSource(String),
    #[error("cannot load font {path}: {message}")]
    FontLoad { path: PathBuf, message: String },
    #[error("font has no glyph for {0:?}")]
    GlyphMissing(char),
    #[error("rendering produced no ink")]
    EmptyRender,
    #[error("glyph has no skeleton pixels")]
    DegenerateGlyph,
    #[error("stroke file line {line}: {message}")]
    StrokeFile { line: usize, message: String },
}

/// Renders the mnemonic for a catalog font at `size` pixels.
pub fn render_mnemonic(catalog: &Catalog, font: &FontRecord, text: &str, size: f32) -> Result<GlyphRaster, GlyphError> {
    let path = catalog
        .glyph_path(font)
        .ok_or_else(|| GlyphError::MissingGlyphSource(font.id.clone()))?;
    render_text(&font.id, &path, text, size)
}

/// Renders the standard mnemonic at the standard size and measures it.
pub fn font_stroke_profile<T: Scalar>(
    catalog: &Catalog,
    font: &FontRecord,
    cfg: &StrokeConfig,
) -> Result<StrokeProfile<T>, GlyphError> {
    let raster = render_mnemonic(catalog, font, MNEMONIC, RENDER_SIZE)?;
    stroke_width(&font.id, &raster.mask, cfg)
}
