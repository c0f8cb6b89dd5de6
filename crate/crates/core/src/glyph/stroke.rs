use std::cmp::Ordering;
use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{distance_transform, skeletonize, GlyphError, Mask};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeProfile<T> {
    pub font_id: String,
    pub stroke_width: T,
    pub skeleton_pixel_count: usize,
}

/// Calibration of the per-skeleton-pixel width estimate `2·d − edge_offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrokeConfig {
    /// Distances are measured to the nearest background pixel centre, so an
    /// odd stroke of width `t` peaks at `(t + 1) / 2`; an offset of 1 maps it back to `t`.
    pub edge_offset: f64,
    /// Add one pixel where the skeleton sits on a flat ridge, i.e. an
    /// off-skeleton 4-neighbour has the same distance. Even-width strokes
    /// have their centre between two pixels and would otherwise read one
    /// pixel thin.
    pub ridge_correction: bool,
}

impl Default for StrokeConfig {
    fn default() -> Self {
        Self {
            edge_offset: 1.0,
            ridge_correction: true,
        }
    }
}

fn median<T: Scalar>(mut v: Vec<T>) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / T::of(2.0)
    }
}

/// Median stroke width over the skeleton of `mask`.
pub fn stroke_width<T: Scalar>(
    font_id: &str,
    mask: &Mask,
    cfg: &StrokeConfig,
) -> Result<StrokeProfile<T>, GlyphError> {
    let field = distance_transform::<T>(mask);
    let skeleton = skeletonize(mask);
    let two = T::of(2.0);
    let offset = T::of(cfg.edge_offset);
    let tol = T::of(1e-6);

    let widths: Vec<T> = skeleton
        .pixels()
        .map(|(x, y)| {
            let d = field.get(x, y);
            let mut w = two * d - offset;
            if cfg.ridge_correction {
                let flat = [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)].iter().any(|&(dx, dy)| {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    mask.get_signed(nx, ny)
                        && !skeleton.get_signed(nx, ny)
                        && (field.get(nx as usize, ny as usize) - d).abs() <= tol * d
                });
                if flat {
                    w = w + T::one();
                }
            }
            w
        })
        .collect();
    if widths.is_empty() {
        return Err(GlyphError::DegenerateGlyph);
    }
    Ok(StrokeProfile {
        font_id: font_id.to_string(),
        skeleton_pixel_count: widths.len(),
        stroke_width: median(widths),
    })
}

/// Stroke profiles as JSON lines, one record per font.
pub fn write_strokes<T: Scalar>(profiles: &[StrokeProfile<T>]) -> String {
    let mut out = String::new();
    for p in profiles {
        out.push_str(&serde_json::to_string(p).expect("profile serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_strokes<T: Scalar>(text: &str) -> Result<HashMap<String, StrokeProfile<T>>, GlyphError> {
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: StrokeProfile<T> = serde_json::from_str(line).map_err(|e| GlyphError::StrokeFile {
            line: i + 1,
            message: e.to_string(),
        })?;
        if !p.stroke_width.is_finite() || p.stroke_width <= T::zero() {
            return Err(GlyphError::StrokeFile {
                line: i + 1,
                message: format!("stroke width of `{}` must be positive", p.font_id),
            });
        }
        if out.contains_key(&p.font_id) {
            return Err(GlyphError::StrokeFile {
                line: i + 1,
                message: format!("duplicate font `{}`", p.font_id),
            });
        }
        out.insert(p.font_id.clone(), p);
    }
    Ok(out)
}

pub fn load_strokes<T: Scalar>(path: impl AsRef<Path>) -> Result<HashMap<String, StrokeProfile<T>>, GlyphError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| GlyphError::StrokeFile {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_strokes(&text)
}
