//! Run configuration shared by the pipeline and the command line.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::corpus::ContentMode;
use crate::error::{Error, Result};
use crate::expansion::{SenseDescriptor, DEFAULT_MIN_LEN, DEFAULT_SENSE_THRESHOLD};
use crate::graph::GraphParams;
use crate::summarizer::{RedundancyMode, ScoringMode, DEFAULT_REDUNDANCY_THRESHOLD, DEFAULT_WORD_LIMIT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub l_min: usize,
    pub l_max: usize,
    pub d_win: usize,
    pub scoring_mode: ScoringMode,
    pub redundancy_mode: RedundancyMode,
    pub redundancy_threshold: f64,
    pub word_limit: usize,
    pub query_expansion: bool,
    pub sense_filter_t: f64,
    pub sense_descriptor: SenseDescriptor,
    pub min_substring_len: usize,
    /// Context length for the chunk-mode entropy model.
    pub chunk_context_rank: usize,
    pub thesaurus_path: Option<PathBuf>,
    pub prior_set_path: Option<PathBuf>,
    pub content_mode: ContentMode,
    pub noise_topics_path: Option<PathBuf>,
    /// 0 means the global pool size.
    pub workers: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = GraphParams::default();
        RunConfig {
            l_min: p.min_rank,
            l_max: p.max_rank,
            d_win: p.window,
            scoring_mode: ScoringMode::default(),
            redundancy_mode: RedundancyMode::default(),
            redundancy_threshold: DEFAULT_REDUNDANCY_THRESHOLD,
            word_limit: DEFAULT_WORD_LIMIT,
            query_expansion: false,
            sense_filter_t: DEFAULT_SENSE_THRESHOLD,
            sense_descriptor: SenseDescriptor::default(),
            min_substring_len: DEFAULT_MIN_LEN,
            chunk_context_rank: 1,
            thesaurus_path: None,
            prior_set_path: None,
            content_mode: ContentMode::default(),
            noise_topics_path: None,
            workers: 0,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn graph_params(&self) -> GraphParams {
        GraphParams {
            min_rank: self.l_min,
            max_rank: self.l_max,
            window: self.d_win,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.graph_params().validate()?;
        if !(self.redundancy_threshold > 0.0 && self.redundancy_threshold < 1.0) {
            return Err(Error::invalid(format!(
                "redundancy threshold must lie in (0, 1), got {}",
                self.redundancy_threshold
            )));
        }
        if !(0.0..1.0).contains(&self.sense_filter_t) {
            return Err(Error::invalid(format!(
                "sense threshold must lie in [0, 1), got {}",
                self.sense_filter_t
            )));
        }
        if self.word_limit == 0 {
            return Err(Error::invalid("word limit must be positive"));
        }
        if self.min_substring_len == 0 {
            return Err(Error::invalid("minimum substring length must be at least 1"));
        }
        if self.chunk_context_rank == 0 {
            return Err(Error::invalid("chunk context rank must be at least 1"));
        }
        if self.query_expansion && self.thesaurus_path.is_none() {
            return Err(Error::invalid("query expansion needs a thesaurus path"));
        }
        Ok(())
    }
}
