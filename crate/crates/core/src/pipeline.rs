//! End-to-end summarization of one topic.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use crate::chunker::EntropyModel;
use crate::config::RunConfig;
use crate::corpus::{
    build_content_model, build_noise_model, document_graphs, read_documents, read_topic_tree, subtract_noise,
    ContentModel, Document, NoiseModel,
};
use crate::error::{Error, Result};
use crate::expansion::{build_semantic_index, expand_query, AcceptedSense, ExpansionOptions, Thesaurus};
use crate::graph::GraphSet;
use crate::ops::merge_sets;
use crate::par::Execution;
use crate::summarizer::{
    compose_summary, rank_candidates, select_by_budget, select_novelty, select_redundancy_removal, split_sentences,
    word_count, CandidateTrace, NoveltyOptions, RedundancyMode, ScoringMode, Sentence,
};

/// Name of the optional query file inside a topic directory.
pub const TOPIC_FILE: &str = "topic";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopicQuery {
    pub title: String,
    pub narrative: String,
}

impl TopicQuery {
    /// Line 1 is the title; the remaining lines are the narrative.
    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let title = lines.next()?.trim().to_owned();
        let narrative = lines
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join(" ");
        if title.is_empty() && narrative.is_empty() {
            return None;
        }
        Some(TopicQuery { title, narrative })
    }

    pub fn text(&self) -> String {
        match (self.title.is_empty(), self.narrative.is_empty()) {
            (false, false) => format!("{} {}", self.title, self.narrative),
            (false, true) => self.title.clone(),
            _ => self.narrative.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TopicInput {
    pub id: String,
    pub documents: Vec<Document>,
    pub query: Option<TopicQuery>,
}

impl TopicInput {
    /// Reads the `.txt` documents of `dir` and its optional query file. The
    /// topic id is the directory name.
    pub fn load(dir: &Path) -> Result<Self> {
        let id = dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .ok_or_else(|| Error::invalid(format!("{} has no directory name", dir.display())))?;
        let documents = read_documents(dir)?;
        if documents.is_empty() {
            return Err(Error::NotFound(format!("no .txt documents in {}", dir.display())));
        }
        let topic_path = dir.join(TOPIC_FILE);
        let query = if topic_path.is_file() {
            let text = std::fs::read_to_string(&topic_path).map_err(|e| Error::io(&topic_path, e))?;
            TopicQuery::parse(&text)
        } else {
            None
        };
        Ok(TopicInput { id, documents, query })
    }
}

/// Inputs shared by every topic of a run.
#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub thesaurus: Option<Thesaurus>,
    pub prior: Option<GraphSet>,
    pub noise: Option<NoiseModel>,
}

impl Resources {
    pub fn load(config: &RunConfig, exec: Execution) -> Result<Self> {
        let thesaurus = match &config.thesaurus_path {
            Some(p) => Some(Thesaurus::load(p)?),
            None => None,
        };
        let prior = match &config.prior_set_path {
            Some(dir) => Some(prior_content(dir, config, exec)?),
            None => None,
        };
        let noise = match &config.noise_topics_path {
            Some(dir) => Some(noise_model(dir, config, exec)?),
            None => None,
        };
        Ok(Resources {
            thesaurus,
            prior,
            noise,
        })
    }
}

/// Content graph of the documents in `dir`.
pub fn prior_content(dir: &Path, config: &RunConfig, exec: Execution) -> Result<GraphSet> {
    let docs = read_documents(dir)?;
    if docs.is_empty() {
        return Err(Error::NotFound(format!(
            "no .txt documents in prior set {}",
            dir.display()
        )));
    }
    let graphs = document_graphs(&docs, config.graph_params(), exec)?;
    Ok(build_content_model(&graphs, config.content_mode)?.content)
}

/// Noise fold over the content graphs of the topic directories under `root`.
pub fn noise_model(root: &Path, config: &RunConfig, exec: Execution) -> Result<NoiseModel> {
    let tree = read_topic_tree(root)?;
    let contents = tree
        .values()
        .map(|docs| {
            let graphs = document_graphs(docs, config.graph_params(), exec)?;
            Ok(build_content_model(&graphs, config.content_mode)?.content)
        })
        .collect::<Result<Vec<_>>>()?;
    build_noise_model(&contents)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateRecord {
    pub text: String,
    #[serde(flatten)]
    pub trace: CandidateTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub topic: String,
    pub config: RunConfig,
    pub documents: usize,
    pub sentences: usize,
    pub content_edges: usize,
    pub noise_subtracted: bool,
    pub query: Option<TopicQuery>,
    pub query_merged: bool,
    pub accepted_senses: Vec<AcceptedSense>,
    pub delimiters: Option<Vec<String>>,
    pub prior_merged: bool,
    pub prior_edges: Option<usize>,
    pub candidates: Vec<CandidateRecord>,
    pub summary_words: usize,
    pub budget_too_small: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicSummary {
    pub topic: String,
    pub summary: String,
    pub diagnostics: Diagnostics,
}

/// Builds the topic's content model (noise-free and query-merged when
/// configured), scores every sentence and selects the summary.
pub fn summarize_topic(
    input: &TopicInput,
    config: &RunConfig,
    resources: &Resources,
    exec: Execution,
) -> Result<TopicSummary> {
    config.validate()?;
    if input.documents.is_empty() {
        return Err(Error::invalid(format!("topic {} has no documents", input.id)));
    }
    let params = config.graph_params();
    let mut warnings = Vec::new();

    let graphs = document_graphs(&input.documents, params, exec)?;
    let mut content: ContentModel = build_content_model(&graphs, config.content_mode)?;
    if let Some(noise) = &resources.noise {
        content = subtract_noise(&content, noise)?;
    }

    let mut accepted_senses = Vec::new();
    let query_text = input.query.as_ref().map(TopicQuery::text);
    let query_merged = query_text.is_some();
    let content_graph = match &query_text {
        Some(q) if config.query_expansion => {
            let thesaurus = resources
                .thesaurus
                .as_ref()
                .ok_or_else(|| Error::invalid("query expansion needs a loaded thesaurus"))?;
            let index = build_semantic_index(q, thesaurus, config.min_substring_len)?;
            let expanded = expand_query(
                q,
                &content,
                &index,
                ExpansionOptions {
                    threshold: config.sense_filter_t,
                    descriptor: config.sense_descriptor,
                    exec,
                },
            )?;
            accepted_senses = expanded.accepted_senses;
            expanded.content
        }
        Some(q) => merge_sets(&params.graphset(q)?, &content.content)?,
        None => {
            if config.query_expansion {
                warnings.push("query expansion requested but the topic has no query".to_owned());
            }
            content.content.clone()
        }
    };
    if content_graph.is_empty() {
        warnings.push("content model is empty; every sentence scores 0".to_owned());
    }

    let delimiters: Option<BTreeSet<String>> = match config.scoring_mode {
        ScoringMode::Chunk => {
            let texts: Vec<&str> = input.documents.iter().map(|d| d.text.as_str()).collect();
            Some(
                EntropyModel::train(&texts, config.chunk_context_rank)?
                    .delimiters()
                    .clone(),
            )
        }
        ScoringMode::Sentence => None,
    };

    let per_doc = exec.try_map(&input.documents, |doc| -> Result<Vec<Sentence>> {
        split_sentences(&doc.text)
            .iter()
            .enumerate()
            .map(|(i, text)| {
                let s = Sentence::new(text, &doc.id, i, params)?;
                match &delimiters {
                    Some(d) => s.with_chunks(d, params),
                    None => Ok(s),
                }
            })
            .collect()
    })?;
    let sentences: Vec<Sentence> = per_doc.into_iter().flatten().collect();
    let sentence_count = sentences.len();

    let ranked = rank_candidates(sentences, &content_graph, config.scoring_mode, exec)?;
    let prior = resources.prior.as_ref();
    let prior_merged = prior.is_some() && config.redundancy_mode == RedundancyMode::Novelty;
    if prior.is_some() && !prior_merged {
        warnings.push("prior set is only used in novelty mode".to_owned());
    }
    let selection = if ranked.is_empty() {
        select_by_budget(&ranked, config.word_limit)
    } else {
        match config.redundancy_mode {
            RedundancyMode::Removal => {
                select_redundancy_removal(&ranked, config.redundancy_threshold, config.word_limit)?
            }
            RedundancyMode::Novelty => select_novelty(
                &ranked,
                &content_graph,
                NoveltyOptions {
                    word_limit: config.word_limit,
                    prior,
                    exec,
                },
            )?,
            RedundancyMode::None => select_by_budget(&ranked, config.word_limit),
        }
    };
    let summary = compose_summary(&ranked, &selection);
    if summary.is_empty() {
        warnings.push("summary is empty".to_owned());
    }

    let candidates = ranked
        .iter()
        .zip(&selection.trace)
        .map(|(c, t)| CandidateRecord {
            text: c.sentence.text.clone(),
            trace: t.clone(),
        })
        .collect();
    let diagnostics = Diagnostics {
        topic: input.id.clone(),
        config: config.clone(),
        documents: input.documents.len(),
        sentences: sentence_count,
        content_edges: content_graph.edge_count(),
        noise_subtracted: content.noise_subtracted,
        query: input.query.clone(),
        query_merged,
        accepted_senses,
        delimiters: delimiters.map(|d| d.into_iter().collect()),
        prior_merged,
        prior_edges: prior.filter(|_| prior_merged).map(GraphSet::edge_count),
        candidates,
        summary_words: word_count(&summary),
        budget_too_small: selection.budget_too_small,
        warnings,
    };
    Ok(TopicSummary {
        topic: input.id.clone(),
        summary,
        diagnostics,
    })
}
