//! Straight-line reference implementations shared by the integration tests
//! and the acceptance harness. Each one is written from the definitions,
//! without calling into the library's algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use fontpair_core::glyph::Mask;
use rand::Rng;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// Scores of one oracle run; every intermediate is kept for comparison.
#[derive(Debug, Clone)]
pub struct OracleRow {
    pub p_raw: f64,
    pub n_raw: f64,
    pub p_norm: f64,
    pub n_norm: f64,
    pub p_gated: f64,
    pub n_gated: f64,
    pub score: f64,
}

fn oracle_perc(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = (v.len() as f64 - 1.0) * q / 100.0;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

fn oracle_norm(values: &[f64]) -> Vec<f64> {
    let mut lo = values[0];
    let mut hi = values[0];
    for &v in values {
        if v < lo {
            lo = v;
        }
        if v > hi {
            hi = v;
        }
    }
    if hi == lo {
        return values.iter().map(|_| 0.5).collect();
    }
    values.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

fn oracle_gate(values: &[f64], low: f64, high: f64, min_len: usize) -> Vec<f64> {
    if values.len() < min_len {
        return values.to_vec();
    }
    let a = oracle_perc(values, low);
    let b = oracle_perc(values, high);
    values.iter().map(|&v| if a <= v && v <= b { v } else { 0.0 }).collect()
}

/// P and N sums, normalization, band gate and product, step by step.
pub fn oracle_scores(heading: &[f64], candidates: &[Vec<f64>], low: f64, high: f64, min_len: usize) -> Vec<OracleRow> {
    let mut p = Vec::new();
    let mut n = Vec::new();
    for c in candidates {
        let mut pos = 0.0;
        let mut neg = 0.0;
        for i in 0..heading.len() {
            let x = heading[i] * c[i];
            if x > 0.0 {
                pos += x;
            }
            if x < 0.0 {
                neg += -x;
            }
        }
        p.push(pos);
        n.push(neg);
    }
    let pn = oracle_norm(&p);
    let nn = oracle_norm(&n);
    let pg = oracle_gate(&pn, low, high, min_len);
    let ng = oracle_gate(&nn, low, high, min_len);
    (0..candidates.len())
        .map(|i| OracleRow {
            p_raw: p[i],
            n_raw: n[i],
            p_norm: pn[i],
            n_norm: nn[i],
            p_gated: pg[i],
            n_gated: ng[i],
            score: pg[i] * ng[i],
        })
        .collect()
}

/// Category ids by descending cosine, ties by id, first `k`.
pub fn oracle_knn(categories: &[(String, Vec<f64>)], query: &[f64], k: usize) -> Vec<(String, f64)> {
    let qn = query.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut all: Vec<(String, f64)> = categories
        .iter()
        .map(|(id, v)| {
            let d: f64 = v.iter().zip(query).map(|(a, b)| a * b).sum();
            let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            (id.clone(), d / (qn * vn))
        })
        .collect();
    // selection by repeated maximum rather than sorting
    let mut out = Vec::new();
    while out.len() < k && !all.is_empty() {
        let mut best = 0;
        for i in 1..all.len() {
            let (ref id, s) = all[i];
            let (ref bid, bs) = all[best];
            if s > bs || (s == bs && id < bid) {
                best = i;
            }
        }
        out.push(all.remove(best));
    }
    out
}

/// Font order for `retrieved` (ids in retrieval order): every pair is compared
/// directly and fonts are emitted by number of fonts they beat.
pub fn oracle_ranking(fonts: &[(String, BTreeSet<String>)], retrieved: &[String]) -> Vec<String> {
    let rank: HashMap<&str, usize> = retrieved.iter().enumerate().map(|(i, c)| (c.as_str(), i + 1)).collect();
    let keyed: Vec<(usize, usize, &str)> = fonts
        .iter()
        .filter_map(|(id, tags)| {
            let hits: Vec<usize> = tags.iter().filter_map(|t| rank.get(t.as_str()).copied()).collect();
            (!hits.is_empty()).then(|| (hits.len(), hits.iter().sum(), id.as_str()))
        })
        .collect();
    let better = |a: &(usize, usize, &str), b: &(usize, usize, &str)| {
        a.0 > b.0 || (a.0 == b.0 && (a.1 < b.1 || (a.1 == b.1 && a.2 < b.2)))
    };
    let mut placed: Vec<(usize, String)> = keyed
        .iter()
        .map(|a| (keyed.iter().filter(|b| better(b, a)).count(), a.2.to_string()))
        .collect();
    placed.sort();
    placed.into_iter().map(|(_, id)| id).collect()
}

/// Nearest background pixel by exhaustive scan; the frame around the mask is background.
pub fn brute_force_distance(mask: &Mask) -> Vec<f64> {
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    let mut background = Vec::new();
    for y in -1..=h {
        for x in -1..=w {
            if !mask.get_signed(x, y) {
                background.push((x, y));
            }
        }
    }
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.get_signed(x, y) {
                out.push(0.0);
                continue;
            }
            let best = background
                .iter()
                .map(|&(bx, by)| (((bx - x).pow(2) + (by - y).pow(2)) as f64).sqrt())
                .fold(f64::INFINITY, f64::min);
            out.push(best);
        }
    }
    out
}

pub fn bar(thickness: usize, offset: (usize, usize)) -> Mask {
    let (ox, oy) = offset;
    Mask::from_fn(140 + ox, thickness + 12 + oy, |x, y| {
        (6 + oy..6 + oy + thickness).contains(&y) && (6 + ox..126 + ox).contains(&x)
    })
}

pub fn disk(radius: i64) -> Mask {
    let side = (2 * radius + 9) as usize;
    let c = radius + 4;
    Mask::from_fn(side, side, |x, y| {
        let (dx, dy) = (x as i64 - c, y as i64 - c);
        dx * dx + dy * dy <= radius * radius
    })
}

pub fn random_vec(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn random_mask(rng: &mut impl Rng, w: usize, h: usize) -> Mask {
    let density: f64 = rng.random_range(0.05..0.95);
    Mask::from_fn(w, h, |_, _| rng.random_bool(density))
}
