//! Subheading selection for a heading font.
//!
//! Candidates must be visibly lighter than the heading:
//! `stroke(candidate) <= coefficient * stroke(heading)`. Survivors are scored
//! against the heading's visual embedding by splitting the componentwise
//! product into its positive mass `P` (agreeing components) and negative
//! mass `N` (opposing components). Both are min-max normalized over the
//! survivor set, zeroed outside a percentile band, and multiplied. The score
//! is high only for candidates that are moderately similar *and* moderately
//! contrasting at the same time.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{EmbeddingIndex, EmbeddingKind};
use crate::glyph::StrokeProfile;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum PairingError {
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("candidate `{id}` has dimension {found}, heading has {expected}")]
    DimensionMismatch { id: String, expected: usize, found: usize },
    #[error("no subheading candidate survives for heading `{0}`")]
    NoCandidates(String),
    #[error("font `{0}` has no stroke profile")]
    MissingStroke(String),
    #[error("font `{0}` has no visual embedding")]
    MissingEmbedding(String),
    #[error("invalid pairing config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairingConfig {
    pub stroke_coefficient: f64,
    /// Percentile band, in [0, 100].
    pub band_low: f64,
    pub band_high: f64,
    /// Percentage points added on each side when too few candidates score above zero.
    pub band_widen_step: f64,
    /// Below this many candidates the band is not applied.
    pub min_candidates_for_gating: usize,
    /// Drop candidates from the heading's own family.
    pub exclude_heading_family: bool,
}

impl Default for PairingConfig {
    fn default() -> Self {
        Self {
            stroke_coefficient: 0.8,
            band_low: 40.0,
            band_high: 60.0,
            band_widen_step: 10.0,
            min_candidates_for_gating: 3,
            exclude_heading_family: false,
        }
    }
}

impl PairingConfig {
    pub fn validate(&self) -> Result<(), PairingError> {
        let bad = |m: &str| Err(PairingError::InvalidConfig(m.to_string()));
        if !(self.stroke_coefficient > 0.0 && self.stroke_coefficient <= 1.0) {
            return bad("stroke_coefficient must be in (0, 1]");
        }
        if !(0.0 <= self.band_low && self.band_low < self.band_high && self.band_high <= 100.0) {
            return bad("band must satisfy 0 <= band_low < band_high <= 100");
        }
        if self.band_widen_step.is_nan() || self.band_widen_step <= 0.0 {
            return bad("band_widen_step must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScores<T> {
    pub candidate_id: String,
    pub p_raw: T,
    pub n_raw: T,
    pub p_norm: T,
    pub n_norm: T,
    pub p_gated: T,
    pub n_gated: T,
    pub balanced_score: T,
}

/// Candidates whose stroke width is at most `coeff * heading_sw`, in input order.
pub fn filter_by_stroke<'a, T: Scalar>(heading_sw: T, candidates: &[(&'a str, T)], coeff: T) -> Vec<&'a str> {
    let limit = coeff * heading_sw;
    candidates
        .iter()
        .filter(|(_, sw)| *sw <= limit)
        .map(|(id, _)| *id)
        .collect()
}

/// Positive and negated-negative sums of the componentwise product `a ∘ b`.
pub fn signed_products<T: Scalar>(a: &[T], b: &[T]) -> Result<(T, T), PairingError> {
    if a.len() != b.len() {
        return Err(PairingError::LengthMismatch(a.len(), b.len()));
    }
    let mut p = T::zero();
    let mut n = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        let prod = x * y;
        p = p + prod.max(T::zero());
        n = n - prod.min(T::zero());
    }
    Ok((p, n))
}

/// `(v - min) / (max - min)`; a constant list maps to 0.5 everywhere.
pub fn minmax_norm<T: Scalar>(values: &[T]) -> Vec<T> {
    let min = values.iter().copied().fold(T::infinity(), T::min);
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let span = max - min;
    if span.is_nan() || span <= T::zero() {
        return vec![T::of(0.5); values.len()];
    }
    values.iter().map(|&v| (v - min) / span).collect()
}

/// Linear-interpolation percentile, `q` in [0, 100]. Panics on an empty slice.
pub fn percentile<T: Scalar>(values: &[T], q: T) -> T {
    assert!(!values.is_empty(), "percentile of an empty list");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let h = T::of_usize(sorted.len() - 1) * q / T::of(100.0);
    let lo = h.floor();
    let hi = h.ceil();
    let (lo_i, hi_i) = (lo.to_usize().unwrap_or(0), hi.to_usize().unwrap_or(0));
    let hi_i = hi_i.min(sorted.len() - 1);
    let lo_i = lo_i.min(hi_i);
    sorted[lo_i] + (h - lo) * (sorted[hi_i] - sorted[lo_i])
}

/// Zeroes values outside `[Perc_low, Perc_high]` (inclusive). Lists shorter
/// than `min_len` pass through unchanged.
pub fn band_gate<T: Scalar>(norms: &[T], low_q: T, high_q: T, min_len: usize) -> Vec<T> {
    if norms.is_empty() || norms.len() < min_len {
        return norms.to_vec();
    }
    let lo = percentile(norms, low_q);
    let hi = percentile(norms, high_q);
    norms
        .iter()
        .map(|&v| if v >= lo && v <= hi { v } else { T::zero() })
        .collect()
}

/// Normalization, gating and scoring from precomputed raw `P`/`N` values.
pub fn score_raws<T: Scalar>(
    ids: &[&str],
    p_raw: &[T],
    n_raw: &[T],
    band: (f64, f64),
    min_candidates_for_gating: usize,
) -> Vec<CandidateScores<T>> {
    let p_norm = minmax_norm(p_raw);
    let n_norm = minmax_norm(n_raw);
    let (lo, hi) = (T::of(band.0), T::of(band.1));
    let p_gated = band_gate(&p_norm, lo, hi, min_candidates_for_gating);
    let n_gated = band_gate(&n_norm, lo, hi, min_candidates_for_gating);
    (0..ids.len())
        .map(|i| CandidateScores {
            candidate_id: ids[i].to_string(),
            p_raw: p_raw[i],
            n_raw: n_raw[i],
            p_norm: p_norm[i],
            n_norm: n_norm[i],
            p_gated: p_gated[i],
            n_gated: n_gated[i],
            balanced_score: p_gated[i] * n_gated[i],
        })
        .collect()
}

fn raws<T: Scalar>(heading: &[T], candidates: &[(&str, &[T])]) -> Result<(Vec<T>, Vec<T>), PairingError> {
    let mut p = Vec::with_capacity(candidates.len());
    let mut n = Vec::with_capacity(candidates.len());
    for (id, v) in candidates {
        if v.len() != heading.len() {
            return Err(PairingError::DimensionMismatch {
                id: id.to_string(),
                expected: heading.len(),
                found: v.len(),
            });
        }
        let (pp, nn) = signed_products(heading, v)?;
        p.push(pp);
        n.push(nn);
    }
    Ok((p, n))
}

/// Balanced-contrast scores of `candidates` against `heading`, in input order.
pub fn balanced_contrast_scores<T: Scalar>(
    heading: &[T],
    candidates: &[(&str, &[T])],
    cfg: &PairingConfig,
) -> Result<Vec<CandidateScores<T>>, PairingError> {
    let (p, n) = raws(heading, candidates)?;
    let ids: Vec<&str> = candidates.iter().map(|(id, _)| *id).collect();
    Ok(score_raws(&ids, &p, &n, (cfg.band_low, cfg.band_high), cfg.min_candidates_for_gating))
}

fn by_score_then_id<T: Scalar>(a: &CandidateScores<T>, b: &CandidateScores<T>) -> Ordering {
    b.balanced_score
        .partial_cmp(&a.balanced_score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.candidate_id.cmp(&b.candidate_id))
}

/// Full record of one pairing run, for inspection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingOutcome<T> {
    pub heading_id: String,
    /// Band that produced `picks`, after any widening.
    pub band: (f64, f64),
    /// Every stroke-filter survivor, sorted by score then id.
    pub table: Vec<CandidateScores<T>>,
    pub picks: Vec<(String, T)>,
}

/// Ranks subheadings for `heading_id` from `pool`.
///
/// Pool fonts lacking a stroke profile or visual embedding are skipped.
/// When fewer than `n` survivors score above zero the band widens by
/// `band_widen_step` per side until it covers [0, 100]. If nothing scores
/// above zero even then, the best zero-score survivors are returned.
pub fn pair_fonts_detailed<T: Scalar>(
    heading_id: &str,
    pool: &[&str],
    strokes: &HashMap<String, StrokeProfile<T>>,
    embeddings: &EmbeddingIndex<T>,
    cfg: &PairingConfig,
    n: usize,
) -> Result<PairingOutcome<T>, PairingError> {
    cfg.validate()?;
    let heading_sw = strokes
        .get(heading_id)
        .ok_or_else(|| PairingError::MissingStroke(heading_id.to_string()))?
        .stroke_width;
    let heading_vec = embeddings
        .get(EmbeddingKind::FontVisual, heading_id)
        .ok_or_else(|| PairingError::MissingEmbedding(heading_id.to_string()))?;

    let unique: BTreeSet<&str> = pool.iter().copied().filter(|id| *id != heading_id).collect();
    let eligible: Vec<(&str, T)> = unique
        .into_iter()
        .filter(|id| embeddings.get(EmbeddingKind::FontVisual, id).is_some())
        .filter_map(|id| strokes.get(id).map(|s| (id, s.stroke_width)))
        .collect();
    let survivors = filter_by_stroke(heading_sw, &eligible, T::of(cfg.stroke_coefficient));
    if survivors.is_empty() {
        return Err(PairingError::NoCandidates(heading_id.to_string()));
    }
    let candidates: Vec<(&str, &[T])> = survivors
        .iter()
        .map(|id| (*id, embeddings.get(EmbeddingKind::FontVisual, id).expect("filtered above")))
        .collect();
    let (p, nn) = raws(heading_vec, &candidates)?;

    let mut band = (cfg.band_low, cfg.band_high);
    let mut table = loop {
        let table = score_raws(&survivors, &p, &nn, band, cfg.min_candidates_for_gating);
        let positive = table.iter().filter(|c| c.balanced_score > T::zero()).count();
        if positive >= n || (band.0 <= 0.0 && band.1 >= 100.0) {
            break table;
        }
        band = (
            (band.0 - cfg.band_widen_step).max(0.0),
            (band.1 + cfg.band_widen_step).min(100.0),
        );
    };
    table.sort_by(by_score_then_id);

    let positive: Vec<(String, T)> = table
        .iter()
        .filter(|c| c.balanced_score > T::zero())
        .take(n)
        .map(|c| (c.candidate_id.clone(), c.balanced_score))
        .collect();
    let picks = if positive.is_empty() {
        table
            .iter()
            .take(n)
            .map(|c| (c.candidate_id.clone(), c.balanced_score))
            .collect()
    } else {
        positive
    };
    Ok(PairingOutcome {
        heading_id: heading_id.to_string(),
        band,
        table,
        picks,
    })
}

pub fn pair_fonts<T: Scalar>(
    heading_id: &str,
    pool: &[&str],
    strokes: &HashMap<String, StrokeProfile<T>>,
    embeddings: &EmbeddingIndex<T>,
    cfg: &PairingConfig,
    n: usize,
) -> Result<Vec<(String, T)>, PairingError> {
    pair_fonts_detailed(heading_id, pool, strokes, embeddings, cfg, n).map(|o| o.picks)
}
