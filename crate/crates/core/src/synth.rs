//! Seeded synthetic corpora for tests and benchmarks.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Frequent English words, roughly in frequency order.
pub const ENGLISH_WORDS: &[&str] = &[
    "the", "of", "and", "to", "a", "in", "is", "it", "you", "that", "he", "was", "for", "on", "are", "with", "as",
    "his", "they", "be", "at", "one", "have", "this", "from", "or", "had", "by", "not", "word", "but", "what", "some",
    "we", "can", "out", "other", "were", "all", "there", "when", "up", "use", "your", "how", "said", "an", "each",
    "she", "which", "do", "their", "time", "if", "will", "way", "about", "many", "then", "them", "write", "would",
    "like", "so", "these", "her", "long", "make", "thing", "see", "him", "two", "has", "look", "more", "day", "could",
    "go", "come", "did", "number", "sound", "no", "most", "people", "my", "over", "know", "water", "than", "call",
    "first", "who", "may", "down", "side", "been", "now", "find", "any", "new", "work", "part", "take", "get", "place",
    "made", "live", "where", "after", "back", "little", "only", "round", "man", "year", "came", "show", "every",
    "good", "me", "give", "our", "under", "name", "very", "through", "just", "form", "sentence", "great", "think",
    "say", "help", "low", "line", "differ", "turn", "cause", "much", "mean", "before", "move", "right", "boy", "old",
    "too", "same", "tell", "does", "set", "three", "want", "air", "well", "also", "play", "small", "end", "put",
    "home", "read", "hand", "port", "large", "spell", "add", "even", "land", "here", "must", "big", "high", "such",
    "follow", "act", "why", "ask", "men", "change", "went", "light", "kind", "off", "need", "house", "picture", "try",
    "us", "again", "animal", "point", "mother", "world", "near", "build", "self", "earth", "father", "head", "stand",
    "own", "page", "should", "country", "found", "answer", "school", "grow", "study", "still", "learn", "plant",
    "cover", "food", "sun", "four", "between", "state", "keep", "eye", "never", "last", "let", "thought", "city",
    "tree", "cross", "farm", "hard", "start", "might", "story", "saw", "far", "sea", "draw", "left", "late", "run",
    "while", "press", "close", "night", "real", "life", "few", "north",
];

/// Words shared by every synthetic topic.
pub const STOPWORDS: &[&str] = &[
    "the", "of", "and", "to", "in", "is", "that", "for", "on", "with", "as", "was", "by", "at", "from", "this", "it",
    "are", "be", "or",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Index drawn with probability proportional to `1 / (i + 1)`.
fn zipf_index(rng: &mut impl Rng, n: usize) -> usize {
    let total: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    let mut x = rng.gen::<f64>() * total;
    for k in 0..n {
        x -= 1.0 / (k + 1) as f64;
        if x <= 0.0 {
            return k;
        }
    }
    n - 1
}

fn capitalize(word: &str) -> String {
    let mut c = word.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Sentences of Zipf-distributed English words, about `words` long in total.
pub fn pseudo_english(rng: &mut impl Rng, words: usize) -> String {
    let mut out = String::new();
    let mut written = 0;
    while written < words {
        let len = rng.gen_range(6..16).min(words - written);
        let sentence: Vec<&str> = (0..len)
            .map(|_| ENGLISH_WORDS[zipf_index(rng, ENGLISH_WORDS.len())])
            .collect();
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&capitalize(sentence[0]));
        for w in &sentence[1..] {
            out.push(' ');
            out.push_str(w);
        }
        out.push(if rng.gen_bool(0.1) { '?' } else { '.' });
        written += len;
    }
    out
}

/// A random lowercase pseudo-word with alternating consonant/vowel runs.
pub fn pseudo_word(rng: &mut impl Rng, min_len: usize, max_len: usize) -> String {
    const CONSONANTS: &[u8] = b"bcdfghjklmnprstvwz";
    const VOWELS: &[u8] = b"aeiou";
    let len = rng.gen_range(min_len..=max_len);
    let mut vowel = rng.gen_bool(0.5);
    (0..len)
        .map(|_| {
            let set = if vowel { VOWELS } else { CONSONANTS };
            vowel = !vowel;
            *set.choose(rng).expect("non-empty alphabet") as char
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct TopicCorpusSpec {
    pub topics: usize,
    pub docs_per_topic: usize,
    pub words_per_doc: usize,
    pub vocabulary_per_topic: usize,
    /// Probability that a token is drawn from the shared stopword list.
    pub stopword_rate: f64,
}

impl Default for TopicCorpusSpec {
    fn default() -> Self {
        TopicCorpusSpec {
            topics: 5,
            docs_per_topic: 10,
            words_per_doc: 120,
            vocabulary_per_topic: 40,
            stopword_rate: 0.5,
        }
    }
}

/// Documents per topic id (`topic00`, `topic01`, ...). Topic vocabularies
/// are disjoint; every topic shares [`STOPWORDS`].
pub fn topic_corpus(spec: TopicCorpusSpec, seed: u64) -> BTreeMap<String, Vec<String>> {
    let mut rng = rng(seed);
    let mut used: BTreeSet<String> = STOPWORDS.iter().map(|s| s.to_string()).collect();
    let mut corpus = BTreeMap::new();
    for t in 0..spec.topics {
        let mut vocab = Vec::with_capacity(spec.vocabulary_per_topic);
        while vocab.len() < spec.vocabulary_per_topic {
            let w = pseudo_word(&mut rng, 4, 9);
            if used.insert(w.clone()) {
                vocab.push(w);
            }
        }
        let docs = (0..spec.docs_per_topic)
            .map(|_| {
                let words: Vec<&str> = (0..spec.words_per_doc)
                    .map(|_| {
                        if rng.gen_bool(spec.stopword_rate) {
                            STOPWORDS[zipf_index(&mut rng, STOPWORDS.len())]
                        } else {
                            vocab[zipf_index(&mut rng, vocab.len())].as_str()
                        }
                    })
                    .collect();
                words.join(" ")
            })
            .collect();
        corpus.insert(format!("topic{t:02}"), docs);
    }
    corpus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_output_is_reproducible() {
        assert_eq!(pseudo_english(&mut rng(7), 50), pseudo_english(&mut rng(7), 50));
        let a = topic_corpus(TopicCorpusSpec::default(), 3);
        assert_eq!(a, topic_corpus(TopicCorpusSpec::default(), 3));
        assert_eq!(a.len(), 5);
        assert!(a.values().all(|docs| docs.len() == 10));
    }

    #[test]
    fn pseudo_english_word_count() {
        let text = pseudo_english(&mut rng(1), 200);
        assert_eq!(text.split_whitespace().count(), 200);
    }

    #[test]
    fn topic_vocabularies_are_disjoint() {
        let c = topic_corpus(TopicCorpusSpec::default(), 11);
        let stop: BTreeSet<&str> = STOPWORDS.iter().copied().collect();
        let vocabs: Vec<BTreeSet<&str>> = c
            .values()
            .map(|docs| {
                docs.iter()
                    .flat_map(|d| d.split(' '))
                    .filter(|w| !stop.contains(w))
                    .collect()
            })
            .collect();
        for i in 0..vocabs.len() {
            for j in i + 1..vocabs.len() {
                assert!(vocabs[i].is_disjoint(&vocabs[j]));
            }
        }
    }
}
