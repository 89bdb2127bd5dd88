//! Similarity and containment measures over n-gram graphs and graph sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphSet, NGramGraph};

/// `min(w1, w2) / max(w1, w2)`, with `value_ratio(0, 0) = 0`.
pub fn value_ratio(w1: f64, w2: f64) -> f64 {
    let hi = w1.max(w2);
    if hi <= 0.0 {
        return 0.0;
    }
    w1.min(w2) / hi
}

fn check_rank(g1: &NGramGraph, g2: &NGramGraph) -> Result<()> {
    if g1.rank() != g2.rank() {
        return Err(Error::RankMismatch {
            left: g1.rank(),
            right: g2.rank(),
        });
    }
    Ok(())
}

/// Sum of value ratios over edges present in both graphs.
fn matched_ratio_sum(g1: &NGramGraph, g2: &NGramGraph) -> f64 {
    let (small, large) = if g1.len() <= g2.len() { (g1, g2) } else { (g2, g1) };
    let large = large.edge_map();
    small
        .edge_map()
        .iter()
        .filter_map(|(k, &w)| large.get(k.joined()).map(|&w2| value_ratio(w, w2)))
        .sum()
}

pub fn value_similarity(g1: &NGramGraph, g2: &NGramGraph) -> Result<f64> {
    check_rank(g1, g2)?;
    let denom = g1.len().max(g2.len());
    if denom == 0 {
        return Ok(0.0);
    }
    Ok(matched_ratio_sum(g1, g2) / denom as f64)
}

pub fn size_similarity(g1: &NGramGraph, g2: &NGramGraph) -> f64 {
    let (a, b) = (g1.len(), g2.len());
    match a.max(b) {
        0 => 1.0,
        hi => a.min(b) as f64 / hi as f64,
    }
}

/// Value, size and normalized value similarity of one rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankSimilarity {
    pub vs: f64,
    pub ss: f64,
    pub nvs: f64,
}

impl RankSimilarity {
    const ZERO: RankSimilarity = RankSimilarity {
        vs: 0.0,
        ss: 0.0,
        nvs: 0.0,
    };
}

/// Rank-weighted similarity of two graph sets plus the per-rank values.
///
/// The set-level `vs` is the overall similarity; `ss` and `nvs` use the same
/// rank weighting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityBreakdown {
    pub vs: f64,
    pub ss: f64,
    pub nvs: f64,
    pub per_rank: BTreeMap<usize, RankSimilarity>,
}

fn rank_similarity(g1: &NGramGraph, g2: &NGramGraph) -> RankSimilarity {
    let (a, b) = (g1.len(), g2.len());
    let hi = a.max(b);
    if hi == 0 {
        return RankSimilarity {
            vs: 0.0,
            ss: 1.0,
            nvs: 0.0,
        };
    }
    let lo = a.min(b);
    if lo == 0 {
        return RankSimilarity::ZERO;
    }
    let matched = matched_ratio_sum(g1, g2);
    let vs = matched / hi as f64;
    let ss = lo as f64 / hi as f64;
    // vs / ss == matched / lo, which is at most 1 up to rounding.
    let nvs = (matched / lo as f64).min(1.0);
    RankSimilarity { vs, ss, nvs }
}

pub fn normalized_value_similarity(g1: &NGramGraph, g2: &NGramGraph) -> Result<RankSimilarity> {
    check_rank(g1, g2)?;
    Ok(rank_similarity(g1, g2))
}

fn rank_weighted(set: &GraphSet, value: impl Fn(usize) -> f64) -> f64 {
    let (num, den) = (set.min_rank()..=set.max_rank())
        .enumerate()
        .fold((0.0, 0.0), |(num, den), (i, r)| {
            (num + r as f64 * value(i), den + r as f64)
        });
    num / den
}

pub fn compare_sets(s1: &GraphSet, s2: &GraphSet) -> Result<SimilarityBreakdown> {
    s1.check_same_range(s2)?;
    let ranks: Vec<RankSimilarity> = s1
        .graphs()
        .iter()
        .zip(s2.graphs())
        .map(|(a, b)| rank_similarity(a, b))
        .collect();
    Ok(SimilarityBreakdown {
        vs: rank_weighted(s1, |i| ranks[i].vs),
        ss: rank_weighted(s1, |i| ranks[i].ss),
        nvs: rank_weighted(s1, |i| ranks[i].nvs),
        per_rank: (s1.min_rank()..).zip(ranks.iter().copied()).collect(),
    })
}

/// Rank-weighted value similarity of two graph sets.
pub fn overall_similarity(s1: &GraphSet, s2: &GraphSet) -> Result<f64> {
    s1.check_same_range(s2)?;
    let values: Vec<f64> = s1
        .graphs()
        .iter()
        .zip(s2.graphs())
        .map(|(a, b)| match a.len().max(b.len()) {
            0 => 0.0,
            hi => matched_ratio_sum(a, b) / hi as f64,
        })
        .collect();
    Ok(rank_weighted(s1, |i| values[i]))
}

/// Rank-weighted normalized value similarity of two graph sets.
pub fn overall_nvs(s1: &GraphSet, s2: &GraphSet) -> Result<f64> {
    s1.check_same_range(s2)?;
    let values: Vec<f64> = s1
        .graphs()
        .iter()
        .zip(s2.graphs())
        .map(|(a, b)| rank_similarity(a, b).nvs)
        .collect();
    Ok(rank_weighted(s1, |i| values[i]))
}

/// Result of a containment query. `degenerate` is set when the contained
/// graph is empty and the value is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Containment {
    pub value: f64,
    pub degenerate: bool,
}

/// How much of `g1` appears in `g2`, weighted by value ratio. Not symmetric.
pub fn value_containment(g1: &NGramGraph, g2: &NGramGraph) -> Result<Containment> {
    check_rank(g1, g2)?;
    if g1.is_empty() {
        return Ok(Containment {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(Containment {
        value: matched_ratio_sum(g1, g2) / g1.len() as f64,
        degenerate: false,
    })
}
