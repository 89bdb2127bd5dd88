//! Character n-gram graphs.
//!
//! A text is read as a sequence of Unicode scalar values. Every n-gram
//! occurrence at position `p` is linked to every occurrence at a later
//! position `q` with `0 < q - p <= window`; the edge is directed from the
//! earlier n-gram to the later one and its weight counts such position pairs.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One n-gram occurrence. `position` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGram {
    pub text: String,
    pub position: usize,
}

/// Byte offsets of every char boundary in `text`, including `text.len()`.
fn char_bounds(text: &str) -> Vec<usize> {
    text.char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .collect()
}

pub fn extract_ngrams(text: &str, rank: usize) -> Result<Vec<NGram>> {
    if rank == 0 {
        return Err(Error::invalid("n-gram rank must be at least 1"));
    }
    let bounds = char_bounds(text);
    let chars = bounds.len() - 1;
    if chars < rank {
        return Ok(Vec::new());
    }
    Ok((0..=chars - rank)
        .map(|i| NGram {
            text: text[bounds[i]..bounds[i + rank]].to_owned(),
            position: i + 1,
        })
        .collect())
}

/// Ordered pair of vertex labels identifying an edge.
///
/// Stored as the concatenated labels plus the split offset. Within a graph
/// all labels have the same char count, so the concatenation alone decides
/// identity, and its byte order equals `(source, target)` order.
#[derive(Clone)]
pub struct EdgeKey {
    joined: Box<str>,
    split: u32,
}

impl EdgeKey {
    pub fn new(source: &str, target: &str) -> Self {
        let mut joined = String::with_capacity(source.len() + target.len());
        joined.push_str(source);
        joined.push_str(target);
        EdgeKey {
            joined: joined.into_boxed_str(),
            split: source.len() as u32,
        }
    }

    fn from_joined(joined: &str, split: usize) -> Self {
        EdgeKey {
            joined: joined.into(),
            split: split as u32,
        }
    }

    pub fn source(&self) -> &str {
        &self.joined[..self.split as usize]
    }

    pub fn target(&self) -> &str {
        &self.joined[self.split as usize..]
    }

    pub(crate) fn joined(&self) -> &str {
        &self.joined
    }
}

impl PartialEq for EdgeKey {
    fn eq(&self, other: &Self) -> bool {
        self.joined == other.joined
    }
}

impl Eq for EdgeKey {}

impl Hash for EdgeKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.joined.hash(state);
    }
}

impl Borrow<str> for EdgeKey {
    fn borrow(&self) -> &str {
        &self.joined
    }
}

impl PartialOrd for EdgeKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EdgeKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.joined.cmp(&other.joined)
    }
}

impl fmt::Debug for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->{:?}", self.source(), self.target())
    }
}

pub(crate) type EdgeMap = FxHashMap<EdgeKey, f64>;

/// Weighted, directed n-gram graph of a single rank.
#[derive(Clone, PartialEq)]
pub struct NGramGraph {
    rank: usize,
    window: usize,
    edges: EdgeMap,
}

impl NGramGraph {
    pub fn new(rank: usize, window: usize) -> Result<Self> {
        validate_rank_window(rank, window)?;
        Ok(Self::empty(rank, window))
    }

    pub(crate) fn empty(rank: usize, window: usize) -> Self {
        NGramGraph {
            rank,
            window,
            edges: EdgeMap::default(),
        }
    }

    pub(crate) fn with_edges(rank: usize, window: usize, edges: EdgeMap) -> Self {
        NGramGraph { rank, window, edges }
    }

    /// Builds the graph of `text`.
    pub fn from_text(text: &str, rank: usize, window: usize) -> Result<Self> {
        validate_rank_window(rank, window)?;
        let bounds = char_bounds(text);
        let chars = bounds.len() - 1;
        let mut graph = Self::empty(rank, window);
        if chars < rank {
            return Ok(graph);
        }
        let count = chars - rank + 1;
        let grams: Vec<&str> = (0..count).map(|i| &text[bounds[i]..bounds[i + rank]]).collect();

        let mut buf = String::new();
        for p in 0..count {
            let last = (p + window).min(count - 1);
            for q in p + 1..=last {
                buf.clear();
                buf.push_str(grams[p]);
                buf.push_str(grams[q]);
                if let Some(w) = graph.edges.get_mut(buf.as_str()) {
                    *w += 1.0;
                } else {
                    graph.edges.insert(EdgeKey::from_joined(&buf, grams[p].len()), 1.0);
                }
            }
        }
        Ok(graph)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Edge count, which is the size of the graph.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self, source: &str, target: &str) -> Option<f64> {
        let mut buf = String::with_capacity(source.len() + target.len());
        buf.push_str(source);
        buf.push_str(target);
        self.edges.get(buf.as_str()).copied()
    }

    pub fn weight_of(&self, key: &EdgeKey) -> Option<f64> {
        self.edges.get(key.joined()).copied()
    }

    pub fn contains(&self, key: &EdgeKey) -> bool {
        self.edges.contains_key(key.joined())
    }

    /// Adds `weight` to the edge, inserting it when missing.
    pub fn add_edge(&mut self, source: &str, target: &str, weight: f64) -> Result<()> {
        self.check_labels(source, target)?;
        check_weight(weight)?;
        *self.edges.entry(EdgeKey::new(source, target)).or_insert(0.0) += weight;
        Ok(())
    }

    /// Sets the edge weight, replacing any previous value.
    pub fn set_edge(&mut self, source: &str, target: &str, weight: f64) -> Result<()> {
        self.check_labels(source, target)?;
        check_weight(weight)?;
        self.edges.insert(EdgeKey::new(source, target), weight);
        Ok(())
    }

    fn check_labels(&self, source: &str, target: &str) -> Result<()> {
        for label in [source, target] {
            let n = label.chars().count();
            if n != self.rank {
                return Err(Error::invalid(format!(
                    "label {label:?} has {n} chars, graph rank is {}",
                    self.rank
                )));
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeKey, f64)> + '_ {
        self.edges.iter().map(|(k, &w)| (k, w))
    }

    /// Edges in `(source, target)` order.
    pub fn sorted_edges(&self) -> Vec<(&EdgeKey, f64)> {
        let mut out: Vec<_> = self.edges().collect();
        out.sort_unstable_by(|a, b| a.0.cmp(b.0));
        out
    }

    pub fn edge_keys(&self) -> BTreeSet<&EdgeKey> {
        self.edges.keys().collect()
    }

    pub fn vertices(&self) -> BTreeSet<&str> {
        self.edges.keys().flat_map(|k| [k.source(), k.target()]).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.sorted_edges().iter().map(|(_, w)| w).sum()
    }

    pub(crate) fn edge_map(&self) -> &EdgeMap {
        &self.edges
    }
}

impl fmt::Debug for NGramGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NGramGraph")
            .field("rank", &self.rank)
            .field("window", &self.window)
            .field("edges", &self.sorted_edges())
            .finish()
    }
}

fn validate_rank_window(rank: usize, window: usize) -> Result<()> {
    if rank == 0 {
        return Err(Error::invalid("n-gram rank must be at least 1"));
    }
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    Ok(())
}

fn check_weight(weight: f64) -> Result<()> {
    if !(weight.is_finite() && weight >= 0.0) {
        return Err(Error::invalid(format!(
            "edge weight must be finite and non-negative, got {weight}"
        )));
    }
    Ok(())
}

pub fn build_graph(text: &str, rank: usize, window: usize) -> Result<NGramGraph> {
    NGramGraph::from_text(text, rank, window)
}

/// Rank range and window used to represent texts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphParams {
    pub min_rank: usize,
    pub max_rank: usize,
    pub window: usize,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams {
            min_rank: 3,
            max_rank: 3,
            window: 3,
        }
    }
}

impl GraphParams {
    pub fn new(min_rank: usize, max_rank: usize, window: usize) -> Result<Self> {
        let p = GraphParams {
            min_rank,
            max_rank,
            window,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        validate_rank_window(self.min_rank, self.window)?;
        if self.min_rank > self.max_rank {
            return Err(Error::invalid(format!(
                "minimum rank {} exceeds maximum rank {}",
                self.min_rank, self.max_rank
            )));
        }
        Ok(())
    }

    pub fn ranks(&self) -> std::ops::RangeInclusive<usize> {
        self.min_rank..=self.max_rank
    }

    pub fn graphset(&self, text: &str) -> Result<GraphSet> {
        GraphSet::from_text(text, *self)
    }
}

/// One graph per rank over a contiguous rank range, sharing one window.
#[derive(Clone, PartialEq)]
pub struct GraphSet {
    min_rank: usize,
    window: usize,
    graphs: Vec<NGramGraph>,
}

impl GraphSet {
    pub fn from_text(text: &str, params: GraphParams) -> Result<Self> {
        params.validate()?;
        let graphs = params
            .ranks()
            .map(|r| NGramGraph::from_text(text, r, params.window))
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphSet {
            min_rank: params.min_rank,
            window: params.window,
            graphs,
        })
    }

    pub fn empty(params: GraphParams) -> Result<Self> {
        params.validate()?;
        Ok(Self::empty_unchecked(params))
    }

    pub(crate) fn empty_unchecked(params: GraphParams) -> Self {
        GraphSet {
            min_rank: params.min_rank,
            window: params.window,
            graphs: params.ranks().map(|r| NGramGraph::empty(r, params.window)).collect(),
        }
    }

    /// Assembles a set from graphs of consecutive ranks with a shared window.
    pub fn from_graphs(graphs: Vec<NGramGraph>) -> Result<Self> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::invalid("a graph set needs at least one graph"))?;
        let (min_rank, window) = (first.rank, first.window);
        for (i, g) in graphs.iter().enumerate() {
            if g.rank != min_rank + i {
                return Err(Error::invalid(format!(
                    "graph ranks must be consecutive starting at {min_rank}, found {} at slot {i}",
                    g.rank
                )));
            }
            if g.window != window {
                return Err(Error::invalid(format!(
                    "all graphs must share window {window}, found {}",
                    g.window
                )));
            }
        }
        Ok(GraphSet {
            min_rank,
            window,
            graphs,
        })
    }

    pub fn params(&self) -> GraphParams {
        GraphParams {
            min_rank: self.min_rank,
            max_rank: self.max_rank(),
            window: self.window,
        }
    }

    pub fn min_rank(&self) -> usize {
        self.min_rank
    }

    pub fn max_rank(&self) -> usize {
        self.min_rank + self.graphs.len() - 1
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn graph(&self, rank: usize) -> Option<&NGramGraph> {
        rank.checked_sub(self.min_rank).and_then(|i| self.graphs.get(i))
    }

    pub fn graphs(&self) -> &[NGramGraph] {
        &self.graphs
    }

    pub fn into_graphs(self) -> Vec<NGramGraph> {
        self.graphs
    }

    /// Total edge count over all ranks.
    pub fn edge_count(&self) -> usize {
        self.graphs.iter().map(NGramGraph::len).sum()
    }

    /// True when every rank's graph is empty.
    pub fn is_empty(&self) -> bool {
        self.graphs.iter().all(NGramGraph::is_empty)
    }

    pub(crate) fn check_same_range(&self, other: &GraphSet) -> Result<()> {
        if self.min_rank != other.min_rank || self.max_rank() != other.max_rank() {
            return Err(Error::RangeMismatch {
                left_min: self.min_rank,
                left_max: self.max_rank(),
                right_min: other.min_rank,
                right_max: other.max_rank(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for GraphSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphSet")
            .field("ranks", &(self.min_rank..=self.max_rank()))
            .field("window", &self.window)
            .field("graphs", &self.graphs)
            .finish()
    }
}

pub fn build_graphset(text: &str, l_min: usize, l_max: usize, window: usize) -> Result<GraphSet> {
    GraphSet::from_text(text, GraphParams::new(l_min, l_max, window)?)
}

/// Collapses every run of whitespace into a single space.
pub fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            if !in_space {
                out.push(' ');
            }
            in_space = true;
        } else {
            out.push(c);
            in_space = false;
        }
    }
    out
}
