//! Thesaurus-backed query expansion.
//!
//! A query is decomposed into a substring graph (the semantic index) whose
//! vertices are annotated with thesaurus senses. Senses whose descriptor
//! graph overlaps the content model strongly enough are merged into the
//! content together with the query graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::ContentModel;
use crate::error::{Error, Result};
use crate::graph::{GraphParams, GraphSet};
use crate::ops::{intersect_sets, merge_sets};
use crate::par::Execution;
use crate::similarity::overall_similarity;

pub const DEFAULT_MIN_LEN: usize = 3;
pub const DEFAULT_SENSE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sense {
    pub id: String,
    pub definition: String,
    pub synonyms: Vec<String>,
}

/// Which text stands for a sense when it is turned into a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SenseDescriptor {
    #[default]
    Definition,
    Synonyms,
}

impl Sense {
    pub fn descriptor(&self, mode: SenseDescriptor) -> String {
        match mode {
            SenseDescriptor::Definition => self.definition.clone(),
            SenseDescriptor::Synonyms => self.synonyms.join(", "),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Thesaurus {
    entries: BTreeMap<String, Vec<Sense>>,
}

impl Thesaurus {
    /// Parses `term<TAB>sense-id<TAB>definition<TAB>syn1,syn2,...` lines.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, Vec<Sense>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 3 || fields.len() > 4 {
                return Err(Error::parse(
                    lineno,
                    "expected term, sense id, definition and optional synonyms",
                ));
            }
            let term = fields[0].trim();
            let definition = fields[2].trim();
            if term.is_empty() || definition.is_empty() {
                return Err(Error::parse(lineno, "term and definition must be non-empty"));
            }
            let synonyms = fields
                .get(3)
                .map(|s| {
                    s.split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_owned)
                        .collect()
                })
                .unwrap_or_default();
            entries.entry(term.to_owned()).or_default().push(Sense {
                id: fields[1].trim().to_owned(),
                definition: definition.to_owned(),
                synonyms,
            });
        }
        Ok(Thesaurus { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }

    pub fn senses(&self, term: &str) -> Option<&[Sense]> {
        self.entries.get(term).map(Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Mean and max pairwise similarity between two terms' sense descriptors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relatedness {
    pub mean: f64,
    pub max: f64,
}

pub fn relatedness(
    t1: &str,
    t2: &str,
    thesaurus: &Thesaurus,
    params: GraphParams,
    descriptor: SenseDescriptor,
) -> Result<Relatedness> {
    let lookup = |t: &str| {
        thesaurus
            .senses(t)
            .ok_or_else(|| Error::NotFound(format!("term {t:?} is not in the thesaurus")))
    };
    let graphs = |senses: &[Sense]| {
        senses
            .iter()
            .map(|s| GraphSet::from_text(&s.descriptor(descriptor), params))
            .collect::<Result<Vec<_>>>()
    };
    let d1 = graphs(lookup(t1)?)?;
    let d2 = graphs(lookup(t2)?)?;
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for a in &d1 {
        for b in &d2 {
            let s = overall_similarity(a, b)?;
            sum += s;
            max = max.max(s);
        }
    }
    Ok(Relatedness {
        mean: sum / (d1.len() * d2.len()) as f64,
        max,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSense {
    pub term: String,
    pub sense: Sense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexVertex {
    pub text: String,
    /// Senses of the vertex's own string.
    pub direct: Vec<AnnotatedSense>,
    /// Senses inherited from the nearest annotated substrings.
    pub inherited: Vec<AnnotatedSense>,
    /// Path length to the vertices that supplied `inherited`.
    pub inherited_distance: Option<usize>,
}

impl IndexVertex {
    pub fn senses(&self) -> &[AnnotatedSense] {
        if self.direct.is_empty() {
            &self.inherited
        } else {
            &self.direct
        }
    }
}

/// Substring graph over the query tokens, annotated with senses.
///
/// An edge `u -> v` means `v` extends `u` by one character on either side,
/// so path length equals the length difference.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticIndex {
    vertices: Vec<IndexVertex>,
    edges: BTreeSet<(usize, usize)>,
    tokens: Vec<String>,
    min_len: usize,
}

/// Lowercased query tokens with leading and trailing punctuation removed.
pub fn query_tokens(query: &str) -> Vec<String> {
    query
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn build_semantic_index(query: &str, thesaurus: &Thesaurus, min_len: usize) -> Result<SemanticIndex> {
    if query.trim().is_empty() {
        return Err(Error::invalid("query must not be empty"));
    }
    if min_len == 0 {
        return Err(Error::invalid("minimum substring length must be at least 1"));
    }
    let tokens = query_tokens(query);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut texts: Vec<String> = Vec::new();
    for token in &tokens {
        let chars: Vec<char> = token.chars().collect();
        for len in min_len..=chars.len() {
            for start in 0..=chars.len() - len {
                let s: String = chars[start..start + len].iter().collect();
                if !ids.contains_key(&s) {
                    ids.insert(s.clone(), texts.len());
                    texts.push(s);
                }
            }
        }
    }

    let mut edges = BTreeSet::new();
    for (v, text) in texts.iter().enumerate() {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() <= min_len {
            continue;
        }
        let shorter = [
            chars[1..].iter().collect::<String>(),
            chars[..chars.len() - 1].iter().collect::<String>(),
        ];
        for s in shorter {
            if let Some(&u) = ids.get(&s) {
                edges.insert((u, v));
            }
        }
    }

    let mut vertices: Vec<IndexVertex> = texts
        .into_iter()
        .map(|text| {
            let direct = thesaurus
                .senses(&text)
                .map(|senses| {
                    senses
                        .iter()
                        .map(|s| AnnotatedSense {
                            term: text.clone(),
                            sense: s.clone(),
                        })
                        .collect()
                })
                .unwrap_or_default();
            IndexVertex {
                text,
                direct,
                inherited: Vec::new(),
                inherited_distance: None,
            }
        })
        .collect();

    // Inheritance: breadth-first search towards shorter strings, stopping at
    // the first level that holds annotated vertices.
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for &(u, v) in &edges {
        parents[v].push(u);
    }
    for v in 0..vertices.len() {
        if !vertices[v].direct.is_empty() {
            continue;
        }
        let mut frontier = vec![v];
        let mut seen = BTreeSet::from([v]);
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let next: BTreeSet<usize> = frontier
                .iter()
                .flat_map(|&x| parents[x].iter().copied())
                .filter(|u| seen.insert(*u))
                .collect();
            let hits: Vec<usize> = next
                .iter()
                .copied()
                .filter(|&u| !vertices[u].direct.is_empty())
                .collect();
            if !hits.is_empty() {
                let mut inherited = Vec::new();
                for u in hits {
                    for s in &vertices[u].direct {
                        if !inherited.contains(s) {
                            inherited.push(s.clone());
                        }
                    }
                }
                vertices[v].inherited = inherited;
                vertices[v].inherited_distance = Some(depth);
                break;
            }
            frontier = next.into_iter().collect();
        }
    }

    Ok(SemanticIndex {
        vertices,
        edges,
        tokens,
        min_len,
    })
}

impl SemanticIndex {
    pub fn vertices(&self) -> &[IndexVertex] {
        &self.vertices
    }

    pub fn vertex(&self, text: &str) -> Option<&IndexVertex> {
        self.vertices.iter().find(|v| v.text == text)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.vertices[u].text.as_str(), self.vertices[v].text.as_str()))
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    /// Senses attached to the whole query tokens, in token order, without
    /// repeats.
    pub fn query_senses(&self) -> Vec<&AnnotatedSense> {
        let mut out: Vec<&AnnotatedSense> = Vec::new();
        for token in &self.tokens {
            if let Some(v) = self.vertex(token) {
                for s in v.senses() {
                    if !out.iter().any(|o| o.term == s.term && o.sense.id == s.sense.id) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcceptedSense {
    pub term: String,
    pub sense_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedContent {
    pub content: GraphSet,
    pub accepted_senses: Vec<AcceptedSense>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionOptions {
    pub threshold: f64,
    pub descriptor: SenseDescriptor,
    pub exec: Execution,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            threshold: DEFAULT_SENSE_THRESHOLD,
            descriptor: SenseDescriptor::Definition,
            exec: Execution::default(),
        }
    }
}

/// Keeps senses whose graph shares edges with the content and scores above
/// the threshold, then merges query, content and kept senses in that order.
pub fn expand_query(
    query: &str,
    content: &ContentModel,
    index: &SemanticIndex,
    options: ExpansionOptions,
) -> Result<ExpandedContent> {
    if !(0.0..1.0).contains(&options.threshold) {
        return Err(Error::invalid(format!(
            "sense threshold must lie in [0, 1), got {}",
            options.threshold
        )));
    }
    let params = content.content.params();
    let candidates = index.query_senses();
    let scored = options.exec.try_map(&candidates, |s| -> Result<_> {
        let g = GraphSet::from_text(&s.sense.descriptor(options.descriptor), params)?;
        let overlaps = !intersect_sets(&g, &content.content)?.is_empty();
        let score = overall_similarity(&g, &content.content)?;
        Ok((g, overlaps, score))
    })?;

    let query_graph = GraphSet::from_text(query, params)?;
    let mut merged = merge_sets(&query_graph, &content.content)?;
    let mut accepted = Vec::new();
    for (s, (g, overlaps, score)) in candidates.iter().zip(scored) {
        if overlaps && score > options.threshold {
            merged = merge_sets(&merged, &g)?;
            accepted.push(AcceptedSense {
                term: s.term.clone(),
                sense_id: s.sense.id.clone(),
                score,
            });
        }
    }
    Ok(ExpandedContent {
        content: merged,
        accepted_senses: accepted,
    })
}
