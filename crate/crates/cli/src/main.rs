use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ngsumm::chunker::EntropyModel;
use ngsumm::config::RunConfig;
use ngsumm::corpus::{self, ContentMode};
use ngsumm::eval::{records_to_jsonl, records_to_text, score_summary, TopicRecord};
use ngsumm::expansion::SenseDescriptor;
use ngsumm::par::with_workers;
use ngsumm::pipeline::{summarize_topic, Resources, TopicInput};
use ngsumm::summarizer::{RedundancyMode, ScoringMode};
use ngsumm::{Execution, GraphSet};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ngsumm", version, about = "N-gram graph multi-document summarizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize one or more topic directories.
    Summarize(SummarizeArgs),
    /// Score peer summaries against model summaries.
    Evaluate(EvaluateArgs),
    /// Train a next-character entropy model and its delimiter set.
    TrainChunker(TrainChunkerArgs),
    /// Assign a document to the closest topic.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    rank_min: Option<usize>,
    #[arg(long)]
    rank_max: Option<usize>,
    #[arg(long)]
    dwin: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scoring {
    Sentence,
    Chunk,
}

#[derive(Clone, Copy, ValueEnum)]
enum Redundancy {
    Removal,
    Novelty,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum Content {
    Intersection,
    UpdateMean,
}

#[derive(Clone, Copy, ValueEnum)]
enum Descriptor {
    Definition,
    Synonyms,
}

impl From<Content> for ContentMode {
    fn from(c: Content) -> Self {
        match c {
            Content::Intersection => ContentMode::Intersection,
            Content::UpdateMean => ContentMode::UpdateMean,
        }
    }
}

#[derive(Args)]
struct SummarizeArgs {
    /// Topic directories holding `.txt` documents and an optional `topic` file.
    #[arg(required = true)]
    topics: Vec<PathBuf>,
    /// Output directory for summaries and diagnostics.
    #[arg(long, short)]
    out: PathBuf,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum)]
    scoring: Option<Scoring>,
    #[arg(long, value_enum)]
    redundancy: Option<Redundancy>,
    #[arg(long)]
    redundancy_threshold: Option<f64>,
    #[arg(long)]
    word_limit: Option<usize>,
    #[arg(long)]
    expand_query: bool,
    #[arg(long)]
    sense_threshold: Option<f64>,
    #[arg(long, value_enum)]
    sense_descriptor: Option<Descriptor>,
    #[arg(long)]
    min_substring_len: Option<usize>,
    #[arg(long)]
    thesaurus: Option<PathBuf>,
    /// Directory of documents already known to the reader.
    #[arg(long)]
    prior_set: Option<PathBuf>,
    #[arg(long, value_enum)]
    content_mode: Option<Content>,
    /// Directory of topic directories whose common subgraph is removed.
    #[arg(long)]
    noise_topics: Option<PathBuf>,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long)]
    workers: Option<usize>,
    /// Recorded in the diagnostics; the pipeline itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EvaluateArgs {
    peer_dir: PathBuf,
    model_dir: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    #[command(flatten)]
    graph: GraphArgs,
}

#[derive(Args)]
struct TrainChunkerArgs {
    corpus_dir: PathBuf,
    out_path: PathBuf,
    #[arg(long, default_value_t = 1)]
    context_rank: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    document: PathBuf,
    /// Directory of topic directories holding `.txt` documents.
    topics_dir: PathBuf,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "intersection")]
    content_mode: Content,
    /// Subtract the cross-topic common subgraph from every topic.
    #[arg(long)]
    remove_noise: bool,
}

/// Failure with the exit code it maps to.
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Summarize(a) => summarize(a),
        Command::Evaluate(a) => evaluate(a),
        Command::TrainChunker(a) => train_chunker(a),
        Command::Classify(a) => classify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn apply_graph_args(config: &mut RunConfig, g: &GraphArgs) {
    if let Some(v) = g.rank_min {
        config.l_min = v;
    }
    if let Some(v) = g.rank_max {
        config.l_max = v;
    }
    if let Some(v) = g.dwin {
        config.d_win = v;
    }
}

fn resolve_config(a: &SummarizeArgs) -> Result<RunConfig, Failure> {
    let mut c = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", p.display()))
                .map_err(usage)?
        }
        None => RunConfig::default(),
    };
    apply_graph_args(&mut c, &a.graph);
    if let Some(s) = a.scoring {
        c.scoring_mode = match s {
            Scoring::Sentence => ScoringMode::Sentence,
            Scoring::Chunk => ScoringMode::Chunk,
        };
    }
    if let Some(r) = a.redundancy {
        c.redundancy_mode = match r {
            Redundancy::Removal => RedundancyMode::Removal,
            Redundancy::Novelty => RedundancyMode::Novelty,
            Redundancy::None => RedundancyMode::None,
        };
    }
    if let Some(v) = a.redundancy_threshold {
        c.redundancy_threshold = v;
    }
    if let Some(v) = a.word_limit {
        c.word_limit = v;
    }
    c.query_expansion |= a.expand_query;
    if let Some(v) = a.sense_threshold {
        c.sense_filter_t = v;
    }
    if let Some(d) = a.sense_descriptor {
        c.sense_descriptor = match d {
            Descriptor::Definition => SenseDescriptor::Definition,
            Descriptor::Synonyms => SenseDescriptor::Synonyms,
        };
    }
    if let Some(v) = a.min_substring_len {
        c.min_substring_len = v;
    }
    if let Some(p) = &a.thesaurus {
        c.thesaurus_path = Some(p.clone());
    }
    if let Some(p) = &a.prior_set {
        c.prior_set_path = Some(p.clone());
    }
    if let Some(m) = a.content_mode {
        c.content_mode = m.into();
    }
    if let Some(p) = &a.noise_topics {
        c.noise_topics_path = Some(p.clone());
    }
    if let Some(v) = a.workers {
        c.workers = v;
    }
    if let Some(v) = a.seed {
        c.seed = v;
    }
    c.validate().map_err(usage)?;
    Ok(c)
}

fn execution(workers: usize) -> Execution {
    if workers == 1 {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn summarize(a: SummarizeArgs) -> Outcome {
    let config = resolve_config(&a)?;
    let exec = execution(config.workers);
    for dir in &a.topics {
        if !dir.is_dir() {
            return Err(anyhow!("topic directory {} does not exist", dir.display()).into());
        }
    }
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    with_workers(config.workers, || -> Outcome {
        let resources = Resources::load(&config, exec).map_err(anyhow::Error::from)?;
        let outputs = exec.try_map(&a.topics, |dir| -> anyhow::Result<_> {
            let input = TopicInput::load(dir).with_context(|| format!("loading {}", dir.display()))?;
            summarize_topic(&input, &config, &resources, exec).with_context(|| format!("summarizing {}", input.id))
        })?;
        for out in outputs {
            let summary_path = a.out.join(format!("{}.summary.txt", out.topic));
            fs::write(&summary_path, format!("{}\n", out.summary))
                .with_context(|| format!("writing {}", summary_path.display()))?;
            let diag_path = a.out.join(format!("{}.diagnostics.json", out.topic));
            let json = serde_json::to_string_pretty(&out.diagnostics).context("encoding diagnostics")?;
            fs::write(&diag_path, json + "\n").with_context(|| format!("writing {}", diag_path.display()))?;
            for w in &out.diagnostics.warnings {
                eprintln!("warning: {}: {w}", out.topic);
            }
            println!("{}\t{} words", summary_path.display(), out.diagnostics.summary_words);
        }
        Ok(())
    })
}

fn txt_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "txt") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Topic id of a peer file: the file name up to its first `.`.
fn topic_id(name: &str) -> &str {
    name.split('.').next().unwrap_or(name)
}

/// `name` belongs to `topic` when it starts with the id followed by a
/// separator, so `t1` does not claim `t10.txt`.
fn matches_topic(name: &str, topic: &str) -> bool {
    name.strip_prefix(topic)
        .and_then(|rest| rest.chars().next())
        .is_some_and(|c| matches!(c, '.' | '_' | '-'))
}

fn evaluate(a: EvaluateArgs) -> Outcome {
    let mut config = RunConfig::default();
    apply_graph_args(&mut config, &a.graph);
    let params = config.graph_params();
    params.validate().map_err(usage)?;
    let peers = txt_files(&a.peer_dir)?;
    let models = txt_files(&a.model_dir)?;
    let mut records = Vec::new();
    for peer in &peers {
        let name = file_name(peer);
        let topic = topic_id(&name);
        let matched: Vec<(String, String)> = models
            .iter()
            .filter(|m| matches_topic(&file_name(m), topic))
            .map(|m| -> anyhow::Result<_> {
                let text = fs::read_to_string(m).with_context(|| format!("reading {}", m.display()))?;
                Ok((file_name(m), text))
            })
            .collect::<anyhow::Result<_>>()?;
        if matched.is_empty() {
            eprintln!("warning: no model summaries for topic {topic}; skipped");
            continue;
        }
        let text = fs::read_to_string(peer).with_context(|| format!("reading {}", peer.display()))?;
        let report = score_summary(&text, &matched, params).map_err(anyhow::Error::from)?;
        records.push(TopicRecord::new(topic, &name, &report));
    }
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let text = records_to_text(&records);
    fs::write(a.out.join("evaluation.txt"), &text).context("writing evaluation.txt")?;
    let jsonl = records_to_jsonl(&records).map_err(anyhow::Error::from)?;
    fs::write(a.out.join("evaluation.jsonl"), jsonl).context("writing evaluation.jsonl")?;
    print!("{text}");
    Ok(())
}

fn train_chunker(a: TrainChunkerArgs) -> Outcome {
    if a.context_rank == 0 {
        return Err(usage(anyhow!("context rank must be at least 1")));
    }
    let texts = txt_files(&a.corpus_dir)?
        .iter()
        .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if texts.is_empty() {
        return Err(anyhow!("no .txt documents in {}", a.corpus_dir.display()).into());
    }
    let model = EntropyModel::train(&texts, a.context_rank).map_err(anyhow::Error::from)?;
    fs::write(&a.out_path, model.to_text()).with_context(|| format!("writing {}", a.out_path.display()))?;
    let delimiters: Vec<String> = model.delimiters().iter().map(|d| format!("{d:?}")).collect();
    println!(
        "threshold {}\ndelimiters {}",
        model.threshold().map_or("none".to_owned(), |t| t.to_string()),
        delimiters.join(" ")
    );
    Ok(())
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    document: String,
    topic: &'a str,
    scores: &'a BTreeMap<String, f64>,
    low_confidence: bool,
}

fn classify(a: ClassifyArgs) -> Outcome {
    let mut config = RunConfig::default();
    apply_graph_args(&mut config, &a.graph);
    let params = config.graph_params();
    params.validate().map_err(usage)?;
    let exec = Execution::default();
    let text = fs::read_to_string(&a.document).with_context(|| format!("reading {}", a.document.display()))?;
    let tree = corpus::read_topic_tree(&a.topics_dir).map_err(anyhow::Error::from)?;
    if tree.is_empty() {
        return Err(anyhow!("no topic directories in {}", a.topics_dir.display()).into());
    }
    let mut graphs = BTreeMap::new();
    for (id, docs) in &tree {
        graphs.insert(
            id.clone(),
            corpus::document_graphs(docs, params, exec).map_err(anyhow::Error::from)?,
        );
    }
    let models = corpus::topic_models(&graphs, a.content_mode.into(), a.remove_noise).map_err(anyhow::Error::from)?;
    let doc = GraphSet::from_text(&text, params).map_err(anyhow::Error::from)?;
    let c = corpus::classify(&doc, &models).map_err(anyhow::Error::from)?;
    let report = ClassifyReport {
        document: a.document.display().to_string(),
        topic: &c.topic,
        scores: &c.scores,
        low_confidence: c.low_confidence,
    };
    println!("{}", serde_json::to_string_pretty(&report).context("encoding report")?);
    Ok(())
}
