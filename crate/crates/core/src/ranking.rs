//! Heading-font ranking by category overlap, and stratified novelty sampling.
//!
//! A font's *combo* is the intersection of its tags with the retrieved
//! categories. Fonts rank by
//! `(|combo| desc, sum of the combo's retrieval ranks asc, font id asc)`,
//! and fonts sharing a combo form one sampling stratum.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::embedding::RetrievedCategory;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("no categories were retrieved")]
    EmptyRetrieval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedFont {
    pub font_id: String,
    pub family: String,
    pub combo: BTreeSet<String>,
    pub rank_sum: usize,
}

impl RankedFont {
    pub fn rank_key(&self) -> (Reverse<usize>, usize, &str) {
        (Reverse(self.combo.len()), self.rank_sum, &self.font_id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinationGroup {
    pub combo: BTreeSet<String>,
    /// Font ids in ranking order.
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HeadingRanking {
    pub fonts: Vec<RankedFont>,
    pub groups: Vec<CombinationGroup>,
}

impl HeadingRanking {
    pub fn font_ids(&self) -> Vec<&str> {
        self.fonts.iter().map(|f| f.font_id.as_str()).collect()
    }

    pub fn combo_of(&self, font_id: &str) -> Option<&BTreeSet<String>> {
        self.fonts.iter().find(|f| f.font_id == font_id).map(|f| &f.combo)
    }
}

pub fn rank_heading_fonts<T>(
    catalog: &Catalog,
    retrieved: &[RetrievedCategory<T>],
) -> Result<HeadingRanking, RankError> {
    if retrieved.is_empty() {
        return Err(RankError::EmptyRetrieval);
    }
    let rank_of: HashMap<&str, usize> = retrieved
        .iter()
        .map(|r| (r.category_id.as_str(), r.rank))
        .collect();

    let mut fonts: Vec<RankedFont> = catalog
        .fonts
        .iter()
        .filter_map(|f| {
            let combo: BTreeSet<String> = f
                .tags
                .iter()
                .filter(|t| rank_of.contains_key(t.as_str()))
                .cloned()
                .collect();
            if combo.is_empty() {
                return None;
            }
            let rank_sum = combo.iter().map(|c| rank_of[c.as_str()]).sum();
            Some(RankedFont {
                font_id: f.id.clone(),
                family: f.family.clone(),
                combo,
                rank_sum,
            })
        })
        .collect();
    fonts.sort_by(|a, b| a.rank_key().cmp(&b.rank_key()));

    let mut groups: Vec<CombinationGroup> = Vec::new();
    let mut slot: HashMap<BTreeSet<String>, usize> = HashMap::new();
    for f in &fonts {
        let idx = *slot.entry(f.combo.clone()).or_insert_with(|| {
            groups.push(CombinationGroup {
                combo: f.combo.clone(),
                members: Vec::new(),
            });
            groups.len() - 1
        });
        groups[idx].members.push(f.font_id.clone());
    }
    Ok(HeadingRanking { fonts, groups })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOptions {
    pub max_per_group: usize,
    /// `None` takes the best-ranked members; `Some` draws uniformly.
    pub seed: Option<u64>,
    /// Skip fonts whose family was already sampled.
    pub distinct_families: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            max_per_group: 1,
            seed: None,
            distinct_families: false,
        }
    }
}

/// Draws up to `max_per_group` fonts per combination group, groups in ranking order.
pub fn stratified_sample(ranking: &HeadingRanking, opts: &SampleOptions) -> Vec<String> {
    let family: HashMap<&str, &str> = ranking
        .fonts
        .iter()
        .map(|f| (f.font_id.as_str(), f.family.as_str()))
        .collect();
    let mut rng = opts.seed.map(ChaCha8Rng::seed_from_u64);
    let mut used_families: HashSet<&str> = HashSet::new();
    let mut out = Vec::new();

    for group in &ranking.groups {
        let mut order: Vec<&str> = group.members.iter().map(String::as_str).collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut taken = 0;
        for id in order {
            if taken == opts.max_per_group {
                break;
            }
            if opts.distinct_families {
                let fam = family.get(id).copied().unwrap_or(id);
                if !used_families.insert(fam) {
                    continue;
                }
            }
            out.push(id.to_string());
            taken += 1;
        }
    }
    out
}
