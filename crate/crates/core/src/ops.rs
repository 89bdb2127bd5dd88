//! Set-style operators over n-gram graphs.
//!
//! All operators work on edges. A weight missing from one operand counts as
//! zero. Graph-set variants apply the operator rank by rank.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeMap, GraphSet, NGramGraph};

/// Weighting applied to edges by [`merge_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeWeighting {
    /// `(w1 + w2) / 2` on every edge of the union.
    #[default]
    Average,
    /// `max(w1, w2)`, the fuzzy-union alternative.
    Max,
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

/// Applies `f(w1, w2)` over the union of both edge sets.
fn combine_union(g1: &NGramGraph, g2: &NGramGraph, f: impl Fn(f64, f64) -> f64) -> NGramGraph {
    let (a, b) = (g1.edge_map(), g2.edge_map());
    let mut out = EdgeMap::default();
    out.reserve(a.len() + b.len());
    for (k, &w1) in a {
        let w2 = b.get(k.joined()).copied().unwrap_or(0.0);
        out.insert(k.clone(), f(w1, w2));
    }
    for (k, &w2) in b {
        if !a.contains_key(k.joined()) {
            out.insert(k.clone(), f(0.0, w2));
        }
    }
    NGramGraph::with_edges(g1.rank(), g1.window(), out)
}

pub fn merge(g1: &NGramGraph, g2: &NGramGraph) -> Result<NGramGraph> {
    merge_with(g1, g2, MergeWeighting::Average)
}

pub fn merge_with(g1: &NGramGraph, g2: &NGramGraph, weighting: MergeWeighting) -> Result<NGramGraph> {
    check_rank(g1, g2)?;
    Ok(match weighting {
        MergeWeighting::Average => combine_union(g1, g2, |a, b| (a + b) / 2.0),
        MergeWeighting::Max => combine_union(g1, g2, f64::max),
    })
}

/// Common edges with averaged weights.
pub fn intersect(g1: &NGramGraph, g2: &NGramGraph) -> Result<NGramGraph> {
    check_rank(g1, g2)?;
    let (a, b) = (g1.edge_map(), g2.edge_map());
    let out: EdgeMap = a
        .iter()
        .filter_map(|(k, &w1)| b.get(k.joined()).map(|&w2| (k.clone(), (w1 + w2) / 2.0)))
        .collect();
    Ok(NGramGraph::with_edges(g1.rank(), g1.window(), out))
}

/// Edges of `g1` that do not occur in `g2`, weights unchanged.
pub fn delta(g1: &NGramGraph, g2: &NGramGraph) -> Result<NGramGraph> {
    check_rank(g1, g2)?;
    let b = g2.edge_map();
    let out: EdgeMap = g1
        .edge_map()
        .iter()
        .filter(|(k, _)| !b.contains_key(k.joined()))
        .map(|(k, &w)| (k.clone(), w))
        .collect();
    Ok(NGramGraph::with_edges(g1.rank(), g1.window(), out))
}

/// Edges present in exactly one operand, with that operand's weight.
pub fn inverse_intersect(g1: &NGramGraph, g2: &NGramGraph) -> Result<NGramGraph> {
    check_rank(g1, g2)?;
    let (a, b) = (g1.edge_map(), g2.edge_map());
    let out: EdgeMap = a
        .iter()
        .filter(|(k, _)| !b.contains_key(k.joined()))
        .chain(b.iter().filter(|(k, _)| !a.contains_key(k.joined())))
        .map(|(k, &w)| (k.clone(), w))
        .collect();
    Ok(NGramGraph::with_edges(g1.rank(), g1.window(), out))
}

fn check_learning_factor(l: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&l) {
        return Err(Error::invalid(format!("learning factor must lie in [0, 1], got {l}")));
    }
    Ok(())
}

/// Moves `g1` towards `g2` by the learning factor `l`:
/// `w = w1 + (w2 - w1) * l` over the union of edges.
pub fn update(g1: &NGramGraph, g2: &NGramGraph, l: f64) -> Result<NGramGraph> {
    check_learning_factor(l)?;
    check_rank(g1, g2)?;
    Ok(combine_union(g1, g2, |w1, w2| w1 + (w2 - w1) * l))
}

fn per_rank(
    s1: &GraphSet,
    s2: &GraphSet,
    op: impl Fn(&NGramGraph, &NGramGraph) -> Result<NGramGraph>,
) -> Result<GraphSet> {
    s1.check_same_range(s2)?;
    let graphs = s1
        .graphs()
        .iter()
        .zip(s2.graphs())
        .map(|(a, b)| op(a, b))
        .collect::<Result<Vec<_>>>()?;
    GraphSet::from_graphs(graphs)
}

pub fn merge_sets(s1: &GraphSet, s2: &GraphSet) -> Result<GraphSet> {
    per_rank(s1, s2, merge)
}

pub fn merge_sets_with(s1: &GraphSet, s2: &GraphSet, weighting: MergeWeighting) -> Result<GraphSet> {
    per_rank(s1, s2, |a, b| merge_with(a, b, weighting))
}

pub fn intersect_sets(s1: &GraphSet, s2: &GraphSet) -> Result<GraphSet> {
    per_rank(s1, s2, intersect)
}

pub fn delta_sets(s1: &GraphSet, s2: &GraphSet) -> Result<GraphSet> {
    per_rank(s1, s2, delta)
}

pub fn inverse_intersect_sets(s1: &GraphSet, s2: &GraphSet) -> Result<GraphSet> {
    per_rank(s1, s2, inverse_intersect)
}

pub fn update_sets(s1: &GraphSet, s2: &GraphSet, l: f64) -> Result<GraphSet> {
    check_learning_factor(l)?;
    per_rank(s1, s2, |a, b| update(a, b, l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str, f64)]) -> NGramGraph {
        let mut g = NGramGraph::new(1, 1).unwrap();
        for &(s, t, w) in edges {
            g.set_edge(s, t, w).unwrap();
        }
        g
    }

    fn weights(g: &NGramGraph) -> Vec<(String, f64)> {
        g.sorted_edges()
            .into_iter()
            .map(|(k, w)| (format!("{}{}", k.source(), k.target()), w))
            .collect()
    }

    fn w(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|&(k, w)| (k.to_owned(), w)).collect()
    }

    // e1 = a->b, e2 = b->c, e3 = c->d throughout.

    #[test]
    fn merge_cases() {
        let m = merge(&graph(&[("a", "b", 2.0)]), &graph(&[("a", "b", 4.0)])).unwrap();
        assert_eq!(weights(&m), w(&[("ab", 3.0)]));

        let m = merge(&graph(&[("a", "b", 2.0)]), &graph(&[("b", "c", 4.0)])).unwrap();
        assert_eq!(weights(&m), w(&[("ab", 1.0), ("bc", 2.0)]));

        let g = graph(&[("a", "b", 2.0), ("b", "c", 0.5)]);
        assert_eq!(merge(&g, &g).unwrap(), g);
    }

    #[test]
    fn fuzzy_max_merge() {
        let m = merge_with(
            &graph(&[("a", "b", 2.0)]),
            &graph(&[("a", "b", 4.0), ("b", "c", 1.0)]),
            MergeWeighting::Max,
        )
        .unwrap();
        assert_eq!(weights(&m), w(&[("ab", 4.0), ("bc", 1.0)]));
    }

    #[test]
    fn intersect_cases() {
        let g1 = graph(&[("a", "b", 2.0), ("b", "c", 1.0)]);
        let g2 = graph(&[("a", "b", 4.0), ("c", "d", 1.0)]);
        assert_eq!(weights(&intersect(&g1, &g2).unwrap()), w(&[("ab", 3.0)]));
        assert!(intersect(&g1, &graph(&[])).unwrap().is_empty());
        assert_eq!(intersect(&g1, &g1).unwrap(), g1);
    }

    #[test]
    fn delta_cases() {
        let g1 = graph(&[("a", "b", 2.0), ("b", "c", 1.0)]);
        let g2 = graph(&[("a", "b", 9.0)]);
        assert_eq!(weights(&delta(&g1, &g2).unwrap()), w(&[("bc", 1.0)]));
        assert_eq!(delta(&g1, &graph(&[])).unwrap(), g1);
        assert!(delta(&g1, &g1).unwrap().is_empty());
    }

    #[test]
    fn inverse_intersect_cases() {
        let g1 = graph(&[("a", "b", 1.0), ("b", "c", 1.0)]);
        let g2 = graph(&[("a", "b", 1.0), ("c", "d", 2.0)]);
        assert_eq!(
            weights(&inverse_intersect(&g1, &g2).unwrap()),
            w(&[("bc", 1.0), ("cd", 2.0)])
        );
        assert!(inverse_intersect(&g1, &g1).unwrap().is_empty());
        assert_eq!(inverse_intersect(&g1, &graph(&[])).unwrap(), g1);
    }

    #[test]
    fn update_cases() {
        let g1 = graph(&[("a", "b", 2.0)]);
        let g2 = graph(&[("a", "b", 4.0)]);
        assert_eq!(weights(&update(&g1, &g2, 0.25).unwrap()), w(&[("ab", 2.5)]));
        assert_eq!(weights(&update(&g1, &g2, 1.0).unwrap()), w(&[("ab", 4.0)]));
        assert!(update(&g1, &g2, 1.5).is_err());
        assert!(update(&g1, &g2, -0.1).is_err());
    }

    #[test]
    fn update_zero_keeps_new_edges_at_zero() {
        let g1 = graph(&[("a", "b", 2.0)]);
        let g2 = graph(&[("b", "c", 4.0)]);
        let u = update(&g1, &g2, 0.0).unwrap();
        assert_eq!(weights(&u), w(&[("ab", 2.0), ("bc", 0.0)]));
    }

    #[test]
    fn rank_mismatch() {
        let g1 = graph(&[]);
        let g2 = NGramGraph::new(2, 1).unwrap();
        assert!(merge(&g1, &g2).is_err());
        assert!(intersect(&g1, &g2).is_err());
        assert!(delta(&g1, &g2).is_err());
        assert!(inverse_intersect(&g1, &g2).is_err());
        assert!(update(&g1, &g2, 0.5).is_err());
    }
}
