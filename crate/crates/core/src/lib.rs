//! Character n-gram graphs, their operator algebra, and an extractive
//! multi-document summarizer built on top of them.
//!
//! Texts are represented as [`GraphSet`]s: one [`NGramGraph`] per n-gram
//! rank, where edges link n-grams that occur within a fixed window of each
//! other. Similarity measures in [`similarity`] and the set-style operators
//! in [`ops`] drive every later stage: common-content extraction
//! ([`corpus`]), chunking ([`chunker`]), query expansion ([`expansion`]),
//! sentence selection ([`summarizer`]) and model-based scoring ([`eval`]).

pub mod chunker;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod expansion;
pub mod format;
pub mod graph;
pub mod ops;
pub mod par;
pub mod pipeline;
pub mod similarity;
pub mod summarizer;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{build_graph, build_graphset, extract_ngrams, EdgeKey, GraphParams, GraphSet, NGram, NGramGraph};
pub use par::Execution;
pub use similarity::{overall_similarity, SimilarityBreakdown};
