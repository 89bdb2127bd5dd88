use ngsumm::ops::{delta_sets, merge_sets};
use ngsumm::similarity::{overall_nvs, overall_similarity};
use ngsumm::summarizer::{
    compose_summary, rank_candidates, select_novelty, select_redundancy_removal, split_sentences, word_count,
    Exclusion, NoveltyOptions, ScoredSentence, ScoringMode, Sentence,
};
use ngsumm::synth::{pseudo_english, rng};
use ngsumm::{Execution, GraphParams, GraphSet};
use proptest::prelude::*;

fn scored(params: GraphParams, items: &[(&str, f64)]) -> Vec<ScoredSentence> {
    items
        .iter()
        .enumerate()
        .map(|(i, &(t, s))| ScoredSentence {
            sentence: Sentence::new(t, "doc", i, params).unwrap(),
            salience: s,
        })
        .collect()
}

#[test]
fn controlled_overlaps_against_top_sentence() {
    let p = GraphParams::new(1, 1, 1).unwrap();
    let top = "abcdefghijklmnopqrstuvwxyz";
    let a = "abQRS";
    let b = "abc0123456789ABCDEFxy";
    let ranked = scored(p, &[(top, 0.9), (a, 0.8), (b, 0.7)]);
    let g = |i: usize| &ranked[i].sentence.graphset;
    assert_eq!(overall_nvs(g(1), g(0)).unwrap(), 0.25);
    assert_eq!(overall_nvs(g(2), g(0)).unwrap(), 0.15);
    // b also overlaps a by 0.25, but a is already redundant.
    assert_eq!(overall_nvs(g(2), g(1)).unwrap(), 0.25);

    let sel = select_redundancy_removal(&ranked, 0.2, 100).unwrap();
    assert_eq!(sel.selected, vec![0, 2]);
    assert_eq!(sel.trace[1].excluded, Some(Exclusion::Redundant));
    assert_eq!(sel.trace[2].excluded, None);
}

/// Straight transcription of the novelty loop, recomputing both rank lists
/// from scratch at every step.
fn novelty_oracle(ranked: &[ScoredSentence], content: &GraphSet, prior: Option<&GraphSet>) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    while chosen.len() < ranked.len() {
        let text: Vec<&str> = chosen.iter().map(|&i| ranked[i].sentence.text.as_str()).collect();
        let mut sum = content.params().graphset(&text.join(" ")).unwrap();
        if let Some(p) = prior {
            sum = if chosen.is_empty() {
                p.clone()
            } else {
                merge_sets(&sum, p).unwrap()
            };
        }
        let sum = delta_sets(&sum, content).unwrap();
        let open: Vec<usize> = (0..ranked.len()).filter(|i| !chosen.contains(i)).collect();
        let red: Vec<f64> = open
            .iter()
            .map(|&i| {
                let c = delta_sets(&ranked[i].sentence.graphset, content).unwrap();
                overall_similarity(&c, &sum).unwrap()
            })
            .collect();
        let sal: Vec<f64> = open.iter().map(|&i| ranked[i].salience).collect();
        let below = |v: &[f64], x: f64| v.iter().filter(|&&y| y < x).count() as i64;
        let score: Vec<i64> = (0..open.len())
            .map(|j| below(&sal, sal[j]) - below(&red, red[j]))
            .collect();
        let mut best = 0;
        for j in 1..open.len() {
            if score[j] > score[best] || (score[j] == score[best] && sal[j] > sal[best]) {
                best = j;
            }
        }
        chosen.push(open[best]);
    }
    chosen
}

#[test]
fn novelty_matches_rank_list_oracle() {
    let p = GraphParams::default();
    let content = p.graphset("storm coast power").unwrap();
    let ranked = scored(
        p,
        &[
            ("The storm hit the coast.", 0.9),
            ("The storm hit the coast hard.", 0.85),
            ("Power lines fell.", 0.6),
            ("Crews worked all night.", 0.5),
        ],
    );
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
    assert_eq!(sel.selected, novelty_oracle(&ranked, &content, None));
    // The near copy of the first pick is pushed behind the fresh sentence.
    assert_eq!(sel.selected[1], 2);
}

#[test]
fn prior_suppresses_planted_duplicate() {
    let p = GraphParams::default();
    let content = p.graphset("quarterly results").unwrap();
    let planted = "Shares of the company rose sharply on Monday.";
    let ranked = scored(
        p,
        &[
            (planted, 0.9),
            ("Analysts expect a strong second half.", 0.7),
            ("The board approved a new dividend.", 0.6),
        ],
    );
    let prior = p.graphset(planted).unwrap();
    let without = select_novelty(
        &ranked,
        &content,
        NoveltyOptions {
            word_limit: 100,
            prior: None,
            exec: Execution::Sequential,
        },
    )
    .unwrap();
    assert_eq!(without.selected[0], 0);
    let with = select_novelty(
        &ranked,
        &content,
        NoveltyOptions {
            word_limit: 100,
            prior: Some(&prior),
            exec: Execution::Sequential,
        },
    )
    .unwrap();
    assert_ne!(with.selected[0], 0);
    assert_eq!(with.selected, novelty_oracle(&ranked, &content, Some(&prior)));
}

#[test]
fn sequential_and_parallel_agree() {
    let p = GraphParams::default();
    let text = pseudo_english(&mut rng(3), 400);
    let content = p.graphset(&text).unwrap();
    let build = || {
        split_sentences(&text)
            .iter()
            .enumerate()
            .map(|(i, s)| Sentence::new(s, "d", i, p).unwrap())
            .collect::<Vec<_>>()
    };
    let a = rank_candidates(build(), &content, ScoringMode::Sentence, Execution::Sequential).unwrap();
    let b = rank_candidates(build(), &content, ScoringMode::Sentence, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    let opts = |exec| NoveltyOptions {
        word_limit: 60,
        prior: None,
        exec,
    };
    assert_eq!(
        select_novelty(&a, &content, opts(Execution::Sequential)).unwrap(),
        select_novelty(&b, &content, opts(Execution::Parallel)).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn removal_respects_threshold_and_budget(seed in 0u64..1000, limit in 5usize..80) {
        let p = GraphParams::default();
        let text = pseudo_english(&mut rng(seed), 150);
        let content = p.graphset(&text).unwrap();
        let sentences: Vec<Sentence> = split_sentences(&text)
            .iter()
            .enumerate()
            .map(|(i, s)| Sentence::new(s, "d", i, p).unwrap())
            .collect();
        let ranked = rank_candidates(sentences, &content, ScoringMode::Sentence, Execution::Sequential).unwrap();
        let sel = select_redundancy_removal(&ranked, 0.2, limit).unwrap();
        let summary = compose_summary(&ranked, &sel);
        prop_assert!(word_count(&summary) <= limit);
        for (x, &i) in sel.selected.iter().enumerate() {
            prop_assert!(text.contains(&ranked[i].sentence.text));
            for &j in &sel.selected[..x] {
                let o = overall_nvs(&ranked[i].sentence.graphset, &ranked[j].sentence.graphset).unwrap();
                prop_assert!(o <= 0.2);
            }
        }
    }

    #[test]
    fn novelty_first_pick_is_top_salience(seed in 0u64..1000) {
        let p = GraphParams::default();
        let text = pseudo_english(&mut rng(seed), 120);
        let content = p.graphset(&text[..text.len() / 2]).unwrap();
        let sentences: Vec<Sentence> = split_sentences(&text)
            .iter()
            .enumerate()
            .map(|(i, s)| Sentence::new(s, "d", i, p).unwrap())
            .collect();
        let ranked = rank_candidates(sentences, &content, ScoringMode::Sentence, Execution::Sequential).unwrap();
        let sel = select_novelty(
            &ranked,
            &content,
            NoveltyOptions { word_limit: 1000, prior: None, exec: Execution::Sequential },
        )
        .unwrap();
        prop_assert_eq!(sel.selected[0], 0);
    }

    #[test]
    fn splitting_keeps_non_boundary_text(s in "[A-Za-z .!?]{0,80}") {
        let joined: String = split_sentences(&s).concat();
        let strip = |t: &str| t.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        prop_assert_eq!(strip(&joined), strip(&s));
    }
}
