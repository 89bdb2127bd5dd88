//! Sentence scoring, redundancy control and summary composition.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::chunker::chunk;
use crate::error::{Error, Result};
use crate::graph::{GraphParams, GraphSet};
use crate::ops::{delta_sets, merge_sets};
use crate::par::Execution;
use crate::similarity::{overall_nvs, overall_similarity};

pub const DEFAULT_REDUNDANCY_THRESHOLD: f64 = 0.2;
pub const DEFAULT_WORD_LIMIT: usize = 100;

/// Tokens that end with a period without ending a sentence.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Sr", "Jr", "St", "Mt", "Gen", "Gov", "Sen", "Rep", "Lt", "Col", "Capt", "Inc",
    "Ltd", "Co", "Corp", "vs", "etc", "e.g", "i.e", "U.S", "U.K", "No", "Jan", "Feb", "Mar", "Apr", "Jun", "Jul",
    "Aug", "Sep", "Sept", "Oct", "Nov", "Dec",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub text: String,
    pub doc_id: String,
    pub index: usize,
    pub graphset: GraphSet,
    /// Chunk graphs; empty in sentence-scoring mode.
    pub chunks: Vec<GraphSet>,
}

impl Sentence {
    pub fn new(text: &str, doc_id: &str, index: usize, params: GraphParams) -> Result<Self> {
        Ok(Sentence {
            text: text.to_owned(),
            doc_id: doc_id.to_owned(),
            index,
            graphset: GraphSet::from_text(text, params)?,
            chunks: Vec::new(),
        })
    }

    /// Replaces the chunk graphs with those of `chunk(text, delimiters)`.
    pub fn with_chunks(mut self, delimiters: &BTreeSet<String>, params: GraphParams) -> Result<Self> {
        self.chunks = chunk(&self.text, delimiters)
            .iter()
            .map(|c| GraphSet::from_text(c, params))
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn word_count(&self) -> usize {
        word_count(&self.text)
    }
}

pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Rule-based sentence splitter.
///
/// A `.`, `!` or `?` ends a sentence when it is followed by whitespace and
/// then an uppercase letter, or by the end of the text, unless the word it
/// ends is a listed abbreviation. Sentences are trimmed.
#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    abbreviations: BTreeSet<String>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        Self::with_abbreviations(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

impl SentenceSplitter {
    pub fn with_abbreviations<'a>(abbrevs: impl IntoIterator<Item = &'a str>) -> Self {
        SentenceSplitter {
            abbreviations: abbrevs.into_iter().map(str::to_owned).collect(),
        }
    }

    pub fn split<'t>(&self, text: &'t str) -> Vec<&'t str> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut out = Vec::new();
        let mut start = 0;
        for (i, &(pos, c)) in chars.iter().enumerate() {
            if !matches!(c, '.' | '!' | '?') {
                continue;
            }
            let end = pos + c.len_utf8();
            let rest = &chars[i + 1..];
            let boundary = match rest.iter().position(|(_, ch)| !ch.is_whitespace()) {
                None => true,
                Some(0) => false,
                Some(k) => rest[k].1.is_uppercase(),
            };
            if !boundary || (c == '.' && self.is_abbreviation(&text[start..pos])) {
                continue;
            }
            let s = text[start..end].trim();
            if !s.is_empty() {
                out.push(s);
            }
            start = end;
        }
        let tail = text[start..].trim();
        if !tail.is_empty() {
            out.push(tail);
        }
        out
    }

    fn is_abbreviation(&self, before: &str) -> bool {
        let word = before
            .rsplit(char::is_whitespace)
            .next()
            .unwrap_or("")
            .trim_start_matches(|c: char| !c.is_alphanumeric());
        !word.is_empty() && self.abbreviations.contains(word)
    }
}

pub fn split_sentences(document: &str) -> Vec<String> {
    SentenceSplitter::default()
        .split(document)
        .into_iter()
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoringMode {
    #[default]
    Sentence,
    Chunk,
}

/// Salience of a sentence: the summed rank-weighted NVS of its chunks to
/// the content. In sentence mode the whole sentence is the only chunk.
pub fn score_sentence(s: &Sentence, content: &GraphSet, mode: ScoringMode) -> Result<f64> {
    if content.is_empty() {
        return Ok(0.0);
    }
    match mode {
        ScoringMode::Sentence => overall_nvs(&s.graphset, content),
        ScoringMode::Chunk => s.chunks.iter().map(|c| overall_nvs(c, content)).sum(),
    }
}

/// Why a candidate was left out of the summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exclusion {
    Redundant,
    OverBudget,
    Used,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSentence {
    pub sentence: Sentence,
    pub salience: f64,
}

/// Scores every sentence and sorts by descending salience; ties keep
/// `(doc_id, index)` order.
pub fn rank_candidates(
    sentences: Vec<Sentence>,
    content: &GraphSet,
    mode: ScoringMode,
    exec: Execution,
) -> Result<Vec<ScoredSentence>> {
    let scores = exec.try_map(&sentences, |s| score_sentence(s, content, mode))?;
    let mut ranked: Vec<ScoredSentence> = sentences
        .into_iter()
        .zip(scores)
        .map(|(sentence, salience)| ScoredSentence { sentence, salience })
        .collect();
    ranked.sort_by(|a, b| {
        b.salience
            .total_cmp(&a.salience)
            .then_with(|| a.sentence.doc_id.cmp(&b.sentence.doc_id))
            .then_with(|| a.sentence.index.cmp(&b.sentence.index))
    });
    Ok(ranked)
}

/// Per-candidate record of a selection run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateTrace {
    /// Position in the ranked list.
    pub rank: usize,
    pub doc_id: String,
    pub index: usize,
    pub salience: f64,
    /// Highest overlap (removal mode) or last redundancy score (novelty mode).
    pub redundancy: Option<f64>,
    /// `R_sim - R_red` when the candidate was picked in novelty mode.
    pub final_rank_score: Option<i64>,
    /// Selection step (0-based) at which the candidate was chosen.
    pub selected_at: Option<usize>,
    pub excluded: Option<Exclusion>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    /// Indices into the ranked list, in selection order.
    pub selected: Vec<usize>,
    pub trace: Vec<CandidateTrace>,
    /// Set when nothing fit the word budget.
    pub budget_too_small: bool,
}

impl Selection {
    fn new(ranked: &[ScoredSentence]) -> Self {
        let trace = ranked
            .iter()
            .enumerate()
            .map(|(rank, c)| CandidateTrace {
                rank,
                doc_id: c.sentence.doc_id.clone(),
                index: c.sentence.index,
                salience: c.salience,
                redundancy: None,
                final_rank_score: None,
                selected_at: None,
                excluded: None,
            })
            .collect();
        Selection {
            selected: Vec::new(),
            trace,
            budget_too_small: false,
        }
    }

    fn pick(&mut self, i: usize) {
        self.trace[i].selected_at = Some(self.selected.len());
        self.selected.push(i);
    }

    fn finish(mut self, ranked: &[ScoredSentence], word_limit: usize) -> Self {
        for t in &mut self.trace {
            if t.selected_at.is_none() && t.excluded.is_none() {
                t.excluded = Some(Exclusion::OverBudget);
            }
        }
        let shortest = ranked.iter().map(|c| c.sentence.word_count()).min();
        self.budget_too_small = self.selected.is_empty() && shortest.is_some_and(|s| s > word_limit);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RedundancyMode {
    #[default]
    Removal,
    Novelty,
    None,
}

/// Takes candidates in rank order, skipping any that would overflow the
/// word budget.
pub fn select_by_budget(ranked: &[ScoredSentence], word_limit: usize) -> Selection {
    let mut sel = Selection::new(ranked);
    let mut words = 0;
    for (i, cand) in ranked.iter().enumerate() {
        let n = cand.sentence.word_count();
        if words + n <= word_limit {
            words += n;
            sel.pick(i);
        }
    }
    sel.finish(ranked, word_limit)
}

/// Walks the ranked list, dropping candidates whose overlap with a kept
/// higher-ranked candidate exceeds `threshold`, and fills the word budget
/// with whole sentences, skipping any that would overflow it.
pub fn select_redundancy_removal(ranked: &[ScoredSentence], threshold: f64, word_limit: usize) -> Result<Selection> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(format!(
            "redundancy threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let mut sel = Selection::new(ranked);
    let mut kept: Vec<usize> = Vec::new();
    let mut words = 0;
    for (i, cand) in ranked.iter().enumerate() {
        let mut worst: f64 = 0.0;
        for &k in &kept {
            let overlap = overall_nvs(&cand.sentence.graphset, &ranked[k].sentence.graphset)?;
            worst = worst.max(overlap);
            if overlap > threshold {
                break;
            }
        }
        sel.trace[i].redundancy = Some(worst);
        if worst > threshold {
            sel.trace[i].excluded = Some(Exclusion::Redundant);
            continue;
        }
        kept.push(i);
        let n = cand.sentence.word_count();
        if words + n <= word_limit {
            words += n;
            sel.pick(i);
        } else {
            sel.trace[i].excluded = Some(Exclusion::OverBudget);
        }
    }
    Ok(sel.finish(ranked, word_limit))
}

/// For each candidate: how many candidates have a strictly smaller value.
/// Equal values share a rank; the largest value gets the largest rank.
fn ranks_from_bottom(values: &[f64]) -> Vec<i64> {
    values
        .iter()
        .map(|v| values.iter().filter(|o| o.total_cmp(v) == Ordering::Less).count() as i64)
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct NoveltyOptions<'a> {
    pub word_limit: usize,
    /// Prior knowledge merged into the summary graph at every step.
    pub prior: Option<&'a GraphSet>,
    pub exec: Execution,
}

/// Iterative novelty-driven selection.
///
/// Each step builds the graph of the summary so far (merged with `prior`),
/// removes the common content from it and from every unused candidate,
/// scores candidates by `R_sim - R_red` and takes the best. `R_sim` and
/// `R_red` count the candidates with strictly lower salience and strictly
/// lower redundancy. Ties go to higher salience, then ranked-list order.
pub fn select_novelty(ranked: &[ScoredSentence], content: &GraphSet, options: NoveltyOptions<'_>) -> Result<Selection> {
    if ranked.is_empty() {
        return Err(Error::invalid("novelty selection needs at least one candidate"));
    }
    let params = content.params();
    let mut sel = Selection::new(ranked);
    let residual: Vec<GraphSet> = options
        .exec
        .try_map(ranked, |c| delta_sets(&c.sentence.graphset, content))?;
    let mut words = 0;
    let mut summary_text = String::new();
    loop {
        // Candidates that no longer fit are dropped for good.
        for (i, c) in ranked.iter().enumerate() {
            let t = &mut sel.trace[i];
            if t.selected_at.is_none() && t.excluded.is_none() && words + c.sentence.word_count() > options.word_limit {
                t.excluded = Some(Exclusion::OverBudget);
            }
        }
        let open: Vec<usize> = (0..ranked.len())
            .filter(|&i| sel.trace[i].selected_at.is_none() && sel.trace[i].excluded.is_none())
            .collect();
        if open.is_empty() {
            break;
        }

        let summary_graph = GraphSet::from_text(&summary_text, params)?;
        let summary_graph = match options.prior {
            Some(prior) if summary_text.is_empty() => prior.clone(),
            Some(prior) => merge_sets(&summary_graph, prior)?,
            None => summary_graph,
        };
        let summary_residual = delta_sets(&summary_graph, content)?;
        let redundancy = options
            .exec
            .try_map(&open, |&i| overall_similarity(&residual[i], &summary_residual))?;
        let salience: Vec<f64> = open.iter().map(|&i| ranked[i].salience).collect();
        let r_sim = ranks_from_bottom(&salience);
        let r_red = ranks_from_bottom(&redundancy);

        let mut best = 0;
        for j in 1..open.len() {
            let (sj, sb) = (r_sim[j] - r_red[j], r_sim[best] - r_red[best]);
            let better = sj > sb || (sj == sb && salience[j] > salience[best]);
            if better {
                best = j;
            }
        }
        for (j, &i) in open.iter().enumerate() {
            sel.trace[i].redundancy = Some(redundancy[j]);
        }
        let chosen = open[best];
        sel.trace[chosen].final_rank_score = Some(r_sim[best] - r_red[best]);
        sel.pick(chosen);
        words += ranked[chosen].sentence.word_count();
        if !summary_text.is_empty() {
            summary_text.push(' ');
        }
        summary_text.push_str(&ranked[chosen].sentence.text);
    }
    Ok(sel.finish(ranked, options.word_limit))
}

/// Joins the selected sentences with single spaces, in selection order.
pub fn compose_summary(ranked: &[ScoredSentence], selection: &Selection) -> String {
    selection
        .selected
        .iter()
        .map(|&i| ranked[i].sentence.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> GraphParams {
        GraphParams::default()
    }

    fn scored(texts: &[(&str, f64)]) -> Vec<ScoredSentence> {
        texts
            .iter()
            .enumerate()
            .map(|(i, &(t, s))| ScoredSentence {
                sentence: Sentence::new(t, "d", i, params()).unwrap(),
                salience: s,
            })
            .collect()
    }

    #[test]
    fn splitter_examples() {
        assert_eq!(split_sentences("A cat. A dog."), vec!["A cat.", "A dog."]);
        assert_eq!(split_sentences("Mr. Smith ran."), vec!["Mr. Smith ran."]);
        assert_eq!(
            split_sentences("No terminal punctuation"),
            vec!["No terminal punctuation"]
        );
        assert_eq!(split_sentences("Why? Because!"), vec!["Why?", "Because!"]);
        assert_eq!(
            split_sentences("Pi is 3.14 today. ok then."),
            vec!["Pi is 3.14 today. ok then."]
        );
        assert!(split_sentences("   ").is_empty());
    }

    #[test]
    fn splitter_keeps_content() {
        let text = "First one.  Second one!\nThird (one)? Last";
        let joined: String = split_sentences(text).concat();
        let stripped: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        assert_eq!(
            joined.chars().filter(|c| !c.is_whitespace()).collect::<String>(),
            stripped
        );
    }

    #[test]
    fn custom_abbreviations() {
        let s = SentenceSplitter::with_abbreviations(["approx"]);
        assert_eq!(
            s.split("It is approx. Ten metres. Yes."),
            vec!["It is approx. Ten metres.", "Yes."]
        );
    }

    #[test]
    fn salience_cases() {
        let content = params().graphset("the storm hit the coast").unwrap();
        let same = Sentence::new("the storm hit the coast", "d", 0, params()).unwrap();
        assert_eq!(score_sentence(&same, &content, ScoringMode::Sentence).unwrap(), 1.0);
        let other = Sentence::new("zzzz qqqq", "d", 1, params()).unwrap();
        assert_eq!(score_sentence(&other, &content, ScoringMode::Sentence).unwrap(), 0.0);
        let empty = GraphSet::empty(params()).unwrap();
        assert_eq!(score_sentence(&same, &empty, ScoringMode::Sentence).unwrap(), 0.0);
    }

    #[test]
    fn chunk_salience_sums_chunks() {
        let p = params();
        let content = p.graphset("abcdefgh").unwrap();
        let mut s = Sentence::new("abcdef xyzw", "d", 0, p).unwrap();
        s = s.with_chunks(&BTreeSet::from([" ".to_string()]), p).unwrap();
        assert_eq!(s.chunks.len(), 2);
        let expected: f64 = ["abcdef ", "xyzw"]
            .iter()
            .map(|c| overall_nvs(&p.graphset(c).unwrap(), &content).unwrap())
            .sum();
        assert_eq!(score_sentence(&s, &content, ScoringMode::Chunk).unwrap(), expected);
    }

    #[test]
    fn ranking_order_and_ties() {
        let p = params();
        let content = p.graphset("alpha beta gamma").unwrap();
        let sentences = vec![
            Sentence::new("zzzz", "b", 0, p).unwrap(),
            Sentence::new("alpha beta gamma", "b", 1, p).unwrap(),
            Sentence::new("qqqq", "a", 5, p).unwrap(),
        ];
        let ranked = rank_candidates(sentences, &content, ScoringMode::Sentence, Execution::Sequential).unwrap();
        let order: Vec<_> = ranked
            .iter()
            .map(|c| (c.sentence.doc_id.as_str(), c.sentence.index))
            .collect();
        assert_eq!(order, vec![("b", 1), ("a", 5), ("b", 0)]);
        assert!(
            rank_candidates(vec![], &content, ScoringMode::Sentence, Execution::Sequential)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn duplicate_is_redundant() {
        let ranked = scored(&[
            ("the storm hit the coast", 0.9),
            ("the storm hit the coast", 0.9),
            ("markets fell sharply", 0.5),
        ]);
        let sel = select_redundancy_removal(&ranked, 0.2, 100).unwrap();
        assert_eq!(sel.selected, vec![0, 2]);
        assert_eq!(sel.trace[1].excluded, Some(Exclusion::Redundant));
    }

    #[test]
    fn disjoint_selection_is_budget_prefix() {
        let ranked = scored(&[("aaaa bbbb", 0.9), ("cccc dddd", 0.8), ("eeee ffff", 0.7)]);
        let sel = select_redundancy_removal(&ranked, 0.2, 4).unwrap();
        assert_eq!(sel.selected, vec![0, 1]);
        assert_eq!(sel.trace[2].excluded, Some(Exclusion::OverBudget));
        assert!(!sel.budget_too_small);
    }

    #[test]
    fn long_candidate_is_skipped_not_truncated() {
        let ranked = scored(&[("one two three four five", 0.9), ("six seven", 0.8)]);
        let sel = select_redundancy_removal(&ranked, 0.2, 3).unwrap();
        assert_eq!(sel.selected, vec![1]);
        let sel = select_redundancy_removal(&ranked, 0.2, 1).unwrap();
        assert!(sel.selected.is_empty());
        assert!(sel.budget_too_small);
        assert!(select_redundancy_removal(&ranked, 0.0, 3).is_err());
        assert!(select_redundancy_removal(&ranked, 1.0, 3).is_err());
    }

    #[test]
    fn budget_only_selection() {
        let ranked = scored(&[("a b c", 0.9), ("a b c", 0.8), ("d e f g", 0.7), ("h", 0.1)]);
        let sel = select_by_budget(&ranked, 7);
        assert_eq!(sel.selected, vec![0, 1, 3]);
        assert_eq!(sel.trace[2].excluded, Some(Exclusion::OverBudget));
    }

    #[test]
    fn rank_from_bottom_shares_ties() {
        assert_eq!(ranks_from_bottom(&[0.5, 0.1, 0.5, 0.9]), vec![1, 0, 1, 3]);
        assert_eq!(ranks_from_bottom(&[0.0, 0.0]), vec![0, 0]);
    }

    #[test]
    fn novelty_first_pick_is_salience_argmax() {
        let content = params().graphset("zzzzzzzz").unwrap();
        let ranked = scored(&[("aaaa bbbb", 0.9), ("cccc dddd", 0.8), ("eeee ffff", 0.7)]);
        let sel = select_novelty(
            &ranked,
            &content,
            NoveltyOptions {
                word_limit: 100,
                prior: None,
                exec: Execution::Sequential,
            },
        )
        .unwrap();
        assert_eq!(sel.selected[0], 0);
        assert_eq!(sel.selected.len(), 3);
        assert!(select_novelty(
            &[],
            &content,
            NoveltyOptions {
                word_limit: 1,
                prior: None,
                exec: Execution::Sequential
            }
        )
        .is_err());
    }

    #[test]
    fn novelty_penalises_copy_of_selected() {
        let content = params().graphset("zzzzzzzz").unwrap();
        let ranked = scored(&[
            ("the storm hit the coast", 0.9),
            ("the storm hit the coast", 0.8),
            ("markets fell sharply", 0.7),
        ]);
        let sel = select_novelty(
            &ranked,
            &content,
            NoveltyOptions {
                word_limit: 100,
                prior: None,
                exec: Execution::Sequential,
            },
        )
        .unwrap();
        // Step 2: the copy scores 1 - 1 and the other 0 - 0; salience breaks the tie.
        assert_eq!(sel.selected, vec![0, 1, 2]);
        assert_eq!(sel.trace[1].redundancy, Some(1.0));
    }

    #[test]
    fn compose_keeps_selection_order() {
        let ranked = scored(&[("First.", 0.9), ("Second.", 0.8)]);
        let sel = Selection {
            selected: vec![1, 0],
            trace: vec![],
            budget_too_small: false,
        };
        assert_eq!(compose_summary(&ranked, &sel), "Second. First.");
        let none = Selection {
            selected: vec![],
            trace: vec![],
            budget_too_small: false,
        };
        assert_eq!(compose_summary(&ranked, &none), "");
        let one = Selection {
            selected: vec![0],
            trace: vec![],
            budget_too_small: false,
        };
        assert_eq!(compose_summary(&ranked, &one), "First.");
    }
}
