//! Model-based summary scoring.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphParams, GraphSet};
use crate::similarity::overall_similarity;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_model: BTreeMap<String, f64>,
    pub mean: f64,
    pub params: GraphParams,
}

/// Overall graph similarity of `peer` to each model summary, and the mean.
pub fn score_summary(peer: &str, models: &[(String, String)], params: GraphParams) -> Result<EvalReport> {
    if models.is_empty() {
        return Err(Error::invalid("evaluation needs at least one model summary"));
    }
    let peer_graph = GraphSet::from_text(peer, params)?;
    let mut per_model = BTreeMap::new();
    for (id, text) in models {
        let model = GraphSet::from_text(text, params)?;
        per_model.insert(id.clone(), overall_similarity(&peer_graph, &model)?);
    }
    let mean = per_model.values().sum::<f64>() / per_model.len() as f64;
    Ok(EvalReport {
        per_model,
        mean,
        params,
    })
}

/// One evaluated topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicRecord {
    pub topic: String,
    pub peer: String,
    pub per_model: BTreeMap<String, f64>,
    pub mean: f64,
}

impl TopicRecord {
    pub fn new(topic: &str, peer: &str, report: &EvalReport) -> Self {
        TopicRecord {
            topic: topic.to_owned(),
            peer: peer.to_owned(),
            per_model: report.per_model.clone(),
            mean: report.mean,
        }
    }
}

/// `topic<TAB>peer<TAB>mean<TAB>model=score,...` per record.
pub fn records_to_text(records: &[TopicRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let models: Vec<String> = r.per_model.iter().map(|(m, s)| format!("{m}={s:.6}")).collect();
        let _ = writeln!(out, "{}\t{}\t{:.6}\t{}", r.topic, r.peer, r.mean, models.join(","));
    }
    out
}

pub fn records_to_jsonl(records: &[TopicRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::invalid(format!("cannot encode record: {e}")))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
