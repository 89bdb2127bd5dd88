//! Document-set models: common content, cross-topic noise, classification.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{graphset_to_string, parse_graph_blocks};
use crate::graph::{GraphParams, GraphSet};
use crate::ops::{delta_sets, intersect_sets, update_sets};
use crate::par::Execution;
use crate::similarity::overall_similarity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContentMode {
    /// Left fold of intersection over the documents, in the given order.
    #[default]
    Intersection,
    /// Running mean through the update operator with `l = 1/i`.
    UpdateMean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContentModel {
    pub content: GraphSet,
    pub doc_count: usize,
    pub noise_subtracted: bool,
}

/// Learning factor for the `i`-th graph (1-based) so that the running
/// update holds the arithmetic mean: `1 - (i - 1) / i`.
pub fn mean_learning_factor(i: usize) -> f64 {
    1.0 - (i as f64 - 1.0) / i as f64
}

pub fn build_content_model(doc_graphs: &[GraphSet], mode: ContentMode) -> Result<ContentModel> {
    let (first, rest) = doc_graphs
        .split_first()
        .ok_or_else(|| Error::invalid("content model needs at least one document graph"))?;
    let mut content = first.clone();
    for (offset, g) in rest.iter().enumerate() {
        content = match mode {
            ContentMode::Intersection => intersect_sets(&content, g)?,
            ContentMode::UpdateMean => update_sets(&content, g, mean_learning_factor(offset + 2))?,
        };
    }
    Ok(ContentModel {
        content,
        doc_count: doc_graphs.len(),
        noise_subtracted: false,
    })
}

impl ContentModel {
    pub fn to_text(&self) -> String {
        format!(
            "docs {} noise_subtracted {}\n{}",
            self.doc_count,
            self.noise_subtracted,
            graphset_to_string(&self.content)
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse(1, "empty content model"))?;
        let parts: Vec<&str> = header.split(' ').collect();
        let (doc_count, noise_subtracted) = match parts.as_slice() {
            ["docs", k, "noise_subtracted", b] => (
                k.parse::<usize>()
                    .map_err(|_| Error::parse(1, format!("bad document count {k:?}")))?,
                b.parse::<bool>()
                    .map_err(|_| Error::parse(1, format!("bad flag {b:?}")))?,
            ),
            _ => return Err(Error::parse(1, format!("bad header {header:?}"))),
        };
        let graphs = parse_graph_blocks(lines, 2)?;
        let content = GraphSet::from_graphs(graphs).map_err(|e| Error::parse(2, e.to_string()))?;
        Ok(ContentModel {
            content,
            doc_count,
            noise_subtracted,
        })
    }
}

/// Cross-topic common subgraph and the size of each fold step.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub noise: GraphSet,
    /// Edge count after each intersection; entry 0 is the first topic graph.
    pub fold_sizes: Vec<usize>,
}

pub fn build_noise_model(topic_graphs: &[GraphSet]) -> Result<NoiseModel> {
    if topic_graphs.len() < 2 {
        return Err(Error::invalid(format!(
            "noise model needs at least 2 topic graphs, got {}",
            topic_graphs.len()
        )));
    }
    let mut noise = topic_graphs[0].clone();
    let mut fold_sizes = vec![noise.edge_count()];
    for g in &topic_graphs[1..] {
        noise = intersect_sets(&noise, g)?;
        fold_sizes.push(noise.edge_count());
    }
    Ok(NoiseModel { noise, fold_sizes })
}

pub fn subtract_noise(content: &ContentModel, noise: &NoiseModel) -> Result<ContentModel> {
    Ok(ContentModel {
        content: delta_sets(&content.content, &noise.noise)?,
        doc_count: content.doc_count,
        noise_subtracted: true,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub topic: String,
    pub scores: BTreeMap<String, f64>,
    /// Set when every topic scored zero.
    pub low_confidence: bool,
}

/// Picks the topic whose content is most similar to `doc`; the
/// lexicographically smallest id wins ties.
pub fn classify(doc: &GraphSet, topics: &BTreeMap<String, ContentModel>) -> Result<Classification> {
    if topics.is_empty() {
        return Err(Error::invalid("classification needs at least one topic"));
    }
    let mut scores = BTreeMap::new();
    let mut best: Option<(&str, f64)> = None;
    for (id, model) in topics {
        let s = overall_similarity(doc, &model.content)?;
        scores.insert(id.clone(), s);
        // BTreeMap iterates in id order, so strict > keeps the smallest id.
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((id, s));
        }
    }
    let (topic, top) = best.expect("at least one topic");
    Ok(Classification {
        topic: topic.to_owned(),
        scores,
        low_confidence: top == 0.0,
    })
}

/// Per-topic recall of classifying each topic's own documents.
pub fn training_recall(
    docs: &BTreeMap<String, Vec<GraphSet>>,
    topics: &BTreeMap<String, ContentModel>,
    exec: Execution,
) -> Result<BTreeMap<String, f64>> {
    let mut recall = BTreeMap::new();
    for (id, graphs) in docs {
        let hits = exec.try_map(graphs, |g| classify(g, topics).map(|c| c.topic == *id))?;
        let correct = hits.iter().filter(|&&h| h).count();
        let value = if graphs.is_empty() {
            0.0
        } else {
            correct as f64 / graphs.len() as f64
        };
        recall.insert(id.clone(), value);
    }
    Ok(recall)
}

/// A document read from disk; `id` is the file stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub path: PathBuf,
    pub text: String,
}

/// Reads every `.txt` file in `dir`, sorted by file name.
pub fn read_documents(dir: &Path) -> Result<Vec<Document>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "txt") {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(Document { id, path, text })
        })
        .collect()
}

/// Reads `<root>/<topic-id>/<doc>.txt`, topics sorted by id.
pub fn read_topic_tree(root: &Path) -> Result<BTreeMap<String, Vec<Document>>> {
    let entries = std::fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut topics = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(root, e))?.path();
        if !path.is_dir() {
            continue;
        }
        let id = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let docs = read_documents(&path)?;
        if !docs.is_empty() {
            topics.insert(id, docs);
        }
    }
    Ok(topics)
}

pub fn document_graphs(docs: &[Document], params: GraphParams, exec: Execution) -> Result<Vec<GraphSet>> {
    exec.try_map(docs, |d| GraphSet::from_text(&d.text, params))
}

/// Builds one content model per topic, optionally removing the cross-topic
/// noise from each.
pub fn topic_models(
    topics: &BTreeMap<String, Vec<GraphSet>>,
    mode: ContentMode,
    remove_noise: bool,
) -> Result<BTreeMap<String, ContentModel>> {
    let mut models = BTreeMap::new();
    for (id, graphs) in topics {
        models.insert(id.clone(), build_content_model(graphs, mode)?);
    }
    if remove_noise && models.len() >= 2 {
        let all: Vec<GraphSet> = models.values().map(|m| m.content.clone()).collect();
        let noise = build_noise_model(&all)?;
        for model in models.values_mut() {
            *model = subtract_noise(model, &noise)?;
        }
    }
    Ok(models)
}
