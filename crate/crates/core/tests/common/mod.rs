#![allow(dead_code)]

use std::collections::BTreeMap;

use ngsumm::{GraphSet, NGramGraph};
use proptest::prelude::*;

/// Edge weights by brute force over every pair of n-gram positions.
pub fn brute_force_edges(text: &str, rank: usize, window: usize) -> BTreeMap<(String, String), f64> {
    let chars: Vec<char> = text.chars().collect();
    let grams: Vec<String> = if chars.len() < rank {
        Vec::new()
    } else {
        (0..=chars.len() - rank)
            .map(|i| chars[i..i + rank].iter().collect())
            .collect()
    };
    let mut edges = BTreeMap::new();
    for p in 0..grams.len() {
        for q in 0..grams.len() {
            if q > p && q - p <= window {
                *edges.entry((grams[p].clone(), grams[q].clone())).or_insert(0.0) += 1.0;
            }
        }
    }
    edges
}

pub fn edge_map(g: &NGramGraph) -> BTreeMap<(String, String), f64> {
    g.edges()
        .map(|(k, w)| ((k.source().to_owned(), k.target().to_owned()), w))
        .collect()
}

/// Rank-1 graph over a five-letter alphabet.
pub fn small_graph() -> impl Strategy<Value = NGramGraph> {
    prop::collection::btree_map((0u8..5, 0u8..5), prop_oneof![Just(1.0), Just(2.0), 0.1f64..10.0], 0..12).prop_map(
        |edges| {
            let mut g = NGramGraph::new(1, 2).unwrap();
            for ((s, t), w) in edges {
                let s = ((b'a' + s) as char).to_string();
                let t = ((b'a' + t) as char).to_string();
                g.set_edge(&s, &t, w).unwrap();
            }
            g
        },
    )
}

pub fn non_empty_graph() -> impl Strategy<Value = NGramGraph> {
    small_graph().prop_filter("non-empty", |g| !g.is_empty())
}

pub fn single(g: NGramGraph) -> GraphSet {
    GraphSet::from_graphs(vec![g]).unwrap()
}

pub fn graph(edges: &[(&str, &str, f64)]) -> NGramGraph {
    let rank = edges.first().map_or(1, |(s, _, _)| s.chars().count());
    let mut g = NGramGraph::new(rank, 2).unwrap();
    for &(s, t, w) in edges {
        g.set_edge(s, t, w).unwrap();
    }
    g
}
