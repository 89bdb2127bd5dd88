//! Next-character entropy chunking.
//!
//! For every context n-gram the model counts which characters follow it and
//! derives the entropy of that distribution. Contexts are ranked by entropy;
//! the threshold sits at the largest entropy drop in the lower half of the
//! ranking, and contexts above it become delimiters. Sentences are then split
//! right after each delimiter occurrence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format::{escape_label, unescape_label};

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyModel {
    context_rank: usize,
    frequencies: BTreeMap<String, BTreeMap<char, u64>>,
    entropies: BTreeMap<String, f64>,
    threshold: Option<f64>,
    delimiters: BTreeSet<String>,
}

/// Threshold chosen by [`select_threshold`], with the entropy ranking used.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSelection {
    pub threshold: f64,
    pub delimiters: BTreeSet<String>,
    /// 1-based position of the threshold in the descending ranking.
    pub index: usize,
    pub ranking: Vec<(String, f64)>,
    pub deltas: Vec<f64>,
}

fn entropy_bits(followers: &BTreeMap<char, u64>) -> f64 {
    let total: u64 = followers.values().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = followers
        .values()
        .map(|&f| {
            let p = f as f64 / total;
            -p * p.log2()
        })
        .sum();
    // A single follower gives -1 * log2(1) = -0.0.
    h.max(0.0)
}

fn count_followers(doc: &str, context_rank: usize, into: &mut BTreeMap<String, BTreeMap<char, u64>>) {
    let chars: Vec<char> = doc.chars().collect();
    if chars.len() <= context_rank {
        return;
    }
    let mut ctx = String::new();
    for i in 0..chars.len() - context_rank {
        ctx.clear();
        ctx.extend(&chars[i..i + context_rank]);
        let next = chars[i + context_rank];
        match into.get_mut(ctx.as_str()) {
            Some(f) => *f.entry(next).or_insert(0) += 1,
            None => {
                into.insert(ctx.clone(), BTreeMap::from([(next, 1)]));
            }
        }
    }
}

impl EntropyModel {
    /// Counts followers per document; no context spans two documents.
    pub fn from_corpus<S: AsRef<str>>(corpus: &[S], context_rank: usize) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::invalid("entropy training needs a non-empty corpus"));
        }
        if context_rank == 0 {
            return Err(Error::invalid("context rank must be at least 1"));
        }
        let total: usize = corpus.iter().map(|d| d.as_ref().chars().count()).sum();
        if total <= context_rank {
            return Err(Error::invalid(format!(
                "corpus has {total} characters, need more than the context rank {context_rank}"
            )));
        }
        let mut frequencies = BTreeMap::new();
        for doc in corpus {
            count_followers(doc.as_ref(), context_rank, &mut frequencies);
        }
        Ok(Self::from_frequencies(context_rank, frequencies))
    }

    pub fn from_frequencies(context_rank: usize, frequencies: BTreeMap<String, BTreeMap<char, u64>>) -> Self {
        let entropies = frequencies
            .iter()
            .map(|(ctx, f)| (ctx.clone(), entropy_bits(f)))
            .collect();
        EntropyModel {
            context_rank,
            frequencies,
            entropies,
            threshold: None,
            delimiters: BTreeSet::new(),
        }
    }

    /// Trains and applies the threshold in one step.
    pub fn train<S: AsRef<str>>(corpus: &[S], context_rank: usize) -> Result<Self> {
        let mut model = Self::from_corpus(corpus, context_rank)?;
        model.apply_threshold()?;
        Ok(model)
    }

    /// Stores the selected threshold and delimiters and returns the trace.
    pub fn apply_threshold(&mut self) -> Result<ThresholdSelection> {
        let sel = select_threshold(self)?;
        self.threshold = Some(sel.threshold);
        self.delimiters = sel.delimiters.clone();
        Ok(sel)
    }

    pub fn context_rank(&self) -> usize {
        self.context_rank
    }

    pub fn frequencies(&self) -> &BTreeMap<String, BTreeMap<char, u64>> {
        &self.frequencies
    }

    pub fn entropies(&self) -> &BTreeMap<String, f64> {
        &self.entropies
    }

    pub fn entropy(&self, context: &str) -> Option<f64> {
        self.entropies.get(context).copied()
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn delimiters(&self) -> &BTreeSet<String> {
        &self.delimiters
    }

    /// One line per `(context, follower, count)`, after a header line.
    pub fn to_text(&self) -> String {
        let mut out = format!("context_rank {}\n", self.context_rank);
        for (ctx, followers) in &self.frequencies {
            for (c, n) in followers {
                let _ = writeln!(out, "{}\t{}\t{}", escape_label(ctx), escape_label(&c.to_string()), n);
            }
        }
        out
    }

    /// Reads counts back and recomputes entropies, threshold and delimiters.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let context_rank = match lines.next() {
            Some((_, header)) => header
                .strip_prefix("context_rank ")
                .and_then(|r| r.parse::<usize>().ok())
                .filter(|&r| r > 0)
                .ok_or_else(|| Error::parse(1, format!("bad header {header:?}")))?,
            None => return Err(Error::parse(1, "empty entropy model")),
        };
        let mut frequencies: BTreeMap<String, BTreeMap<char, u64>> = BTreeMap::new();
        for (i, line) in lines {
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [ctx, follower, count] = fields.as_slice() else {
                return Err(Error::parse(lineno, "expected context, follower and count"));
            };
            let ctx = unescape_label(ctx).map_err(|m| Error::parse(lineno, m))?;
            if ctx.chars().count() != context_rank {
                return Err(Error::parse(lineno, format!("context {ctx:?} has wrong length")));
            }
            let follower = unescape_label(follower).map_err(|m| Error::parse(lineno, m))?;
            let mut fc = follower.chars();
            let (Some(c), None) = (fc.next(), fc.next()) else {
                return Err(Error::parse(lineno, "follower must be one character"));
            };
            let count: u64 = count
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad count {count:?}")))?;
            *frequencies.entry(ctx).or_default().entry(c).or_insert(0) += count;
        }
        let mut model = Self::from_frequencies(context_rank, frequencies);
        if model.entropies.len() >= 2 {
            model.apply_threshold()?;
        }
        Ok(model)
    }
}

pub fn train_entropy<S: AsRef<str>>(corpus: &[S], context_rank: usize) -> Result<EntropyModel> {
    EntropyModel::from_corpus(corpus, context_rank)
}

/// Picks the threshold from an already ranked entropy list (descending).
///
/// `D(k) = |H[k+1] - H[k]|` for `k < M` and `D(M) = 0`; the threshold is
/// `H[k*]` where `k*` maximises `D` over `k > floor(M / 2)`, smallest `k`
/// winning ties. Indices are 1-based.
pub fn threshold_from_ranking(entropies: &[f64]) -> Result<(usize, Vec<f64>)> {
    let m = entropies.len();
    if m < 2 {
        return Err(Error::DegenerateModel(format!(
            "threshold selection needs at least 2 contexts, got {m}"
        )));
    }
    let deltas: Vec<f64> = (0..m)
        .map(|k| {
            if k + 1 < m {
                (entropies[k + 1] - entropies[k]).abs()
            } else {
                0.0
            }
        })
        .collect();
    let mut best = m / 2 + 1;
    for k in best + 1..=m {
        if deltas[k - 1] > deltas[best - 1] {
            best = k;
        }
    }
    Ok((best, deltas))
}

pub fn select_threshold(model: &EntropyModel) -> Result<ThresholdSelection> {
    let mut ranking: Vec<(String, f64)> = model.entropies.iter().map(|(c, &h)| (c.clone(), h)).collect();
    // Descending entropy; context order breaks ties so the ranking is stable.
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let values: Vec<f64> = ranking.iter().map(|(_, h)| *h).collect();
    let (index, deltas) = threshold_from_ranking(&values)?;
    let threshold = values[index - 1];
    let delimiters = ranking
        .iter()
        .filter(|(_, h)| *h > threshold)
        .map(|(c, _)| c.clone())
        .collect();
    Ok(ThresholdSelection {
        threshold,
        delimiters,
        index,
        ranking,
        deltas,
    })
}

/// Splits after every occurrence of a delimiter. Joining the chunks gives
/// back the input.
pub fn chunk(sentence: &str, delimiters: &BTreeSet<String>) -> Vec<String> {
    let mut chunks = Vec::new();
    if sentence.is_empty() {
        return chunks;
    }
    let ranks: BTreeSet<usize> = delimiters.iter().map(|d| d.chars().count()).collect();
    let bounds: Vec<usize> = sentence
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(sentence.len()))
        .collect();
    let mut start = 0;
    for end in 1..bounds.len() {
        let hit = ranks
            .iter()
            .any(|&n| n > 0 && end >= n && delimiters.contains(&sentence[bounds[end - n]..bounds[end]]));
        if hit {
            chunks.push(sentence[bounds[start]..bounds[end]].to_owned());
            start = end;
        }
    }
    if start + 1 < bounds.len() {
        chunks.push(sentence[bounds[start]..].to_owned());
    }
    chunks
}
