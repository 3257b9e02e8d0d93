//! Loading a corpus, summarizing it with a worker pool, and writing run
//! outputs (summaries, manifest, config echo, timings, ROUGE reports).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use updsum_core::assembly::{mine_acronyms, AcronymTable};
use updsum_core::corpus::{build_history, load_cluster, load_references, load_topic, LoadWarning};
use updsum_core::rouge::evaluate_run;
use updsum_core::{
    Cluster, CorpusLayout, History, ProcessedCluster, Resources, RougeReport, SetLabel, SetRun,
    Summarizer, SummaryKey, Topic,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// A topic as found on disk. Problems are kept as messages so that one bad
/// topic never aborts the run.
#[derive(Clone, Debug)]
pub struct LoadedTopic {
    pub id: String,
    pub topic: Result<Topic, String>,
    pub a: Result<Cluster, String>,
    pub b: Result<Cluster, String>,
    pub warnings: Vec<LoadWarning>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub topics: Vec<LoadedTopic>,
    /// Acronym definitions mined over every loaded cluster.
    pub acronyms: AcronymTable,
}

pub fn load_corpus(data_root: &Path) -> CliResult<Corpus> {
    let layout = CorpusLayout::new(data_root);
    let ids = layout.topic_ids()?;
    if ids.is_empty() {
        return Err(CliError::Failed(format!(
            "no topics found in {}",
            layout.topics_dir().display()
        )));
    }
    let mut topics = Vec::with_capacity(ids.len());
    for id in ids {
        let mut warnings = Vec::new();
        let mut cluster = |set: SetLabel| -> Result<Cluster, String> {
            let dir = layout.cluster_dir(&id, set);
            if !dir.is_dir() {
                return Err(format!("missing cluster directory {}", dir.display()));
            }
            let loaded = load_cluster(&dir, set).map_err(|e| e.to_string())?;
            warnings.extend(loaded.warnings);
            Ok(loaded.cluster)
        };
        let a = cluster(SetLabel::A);
        let b = cluster(SetLabel::B);
        let topic = load_topic(&layout.topic_file(&id)).map_err(|e| e.to_string());
        topics.push(LoadedTopic {
            id,
            topic,
            a,
            b,
            warnings,
        });
    }
    let clusters: Vec<Cluster> = topics
        .iter()
        .flat_map(|t| [&t.a, &t.b])
        .filter_map(|c| c.as_ref().ok().cloned())
        .collect();
    let acronyms = mine_acronyms(&clusters);
    log::info!("loaded {} topics, {} acronyms", topics.len(), acronyms.len());
    Ok(Corpus { topics, acronyms })
}

/// Preprocessed topic, ready to be summarized under any ranking config.
#[derive(Clone, Debug)]
pub struct PreparedTopic {
    pub id: String,
    pub topic: Result<Topic, String>,
    pub a: Result<ProcessedCluster, String>,
    pub b: Result<ProcessedCluster, String>,
    pub warnings: Vec<LoadWarning>,
}

impl PreparedTopic {
    fn history(&self) -> Result<History, String> {
        match &self.a {
            Ok(a) => Ok(build_history(std::slice::from_ref(a))),
            Err(e) => Err(format!("set A unavailable, no history for set B ({e})")),
        }
    }
}

pub fn thread_pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Failed(format!("cannot start worker pool: {e}")))
}

pub fn prepare(topics: &[LoadedTopic], resources: &Resources, pool: &rayon::ThreadPool) -> Vec<PreparedTopic> {
    let pre = &resources.preprocessor;
    pool.install(|| {
        topics
            .par_iter()
            .map(|t| PreparedTopic {
                id: t.id.clone(),
                topic: t.topic.clone().map(|mut topic| {
                    pre.process_topic(&mut topic);
                    topic
                }),
                a: t.a.clone().map(|c| pre.process_cluster(c)),
                b: t.b.clone().map(|c| pre.process_cluster(c)),
                warnings: t.warnings.clone(),
            })
            .collect()
    })
}

#[derive(Clone, Debug)]
pub struct SetOutcome {
    pub set: SetLabel,
    pub result: Result<SetRun, String>,
}

#[derive(Clone, Debug)]
pub struct TopicOutcome {
    pub topic_id: String,
    pub sets: Vec<SetOutcome>,
    pub warnings: Vec<LoadWarning>,
    pub elapsed: Duration,
}

impl TopicOutcome {
    pub fn failures(&self) -> usize {
        self.sets.iter().filter(|s| s.result.is_err()).count()
    }
}

/// Summarizes the requested sets of every topic. Results come back in
/// topic order whatever the number of workers.
pub fn summarize_prepared(
    topics: &[PreparedTopic],
    summarizer: &Summarizer,
    acronyms: &AcronymTable,
    sets: &[SetLabel],
    pool: &rayon::ThreadPool,
) -> Vec<TopicOutcome> {
    pool.install(|| {
        topics
            .par_iter()
            .map(|t| {
                let start = Instant::now();
                let sets = sets
                    .iter()
                    .map(|&set| {
                        let result = summarize_one(t, set, summarizer, acronyms);
                        if let Err(e) = &result {
                            log::warn!("{}.{set}: {e}", t.id);
                        }
                        SetOutcome { set, result }
                    })
                    .collect();
                TopicOutcome {
                    topic_id: t.id.clone(),
                    sets,
                    warnings: t.warnings.clone(),
                    elapsed: start.elapsed(),
                }
            })
            .collect()
    })
}

fn summarize_one(
    t: &PreparedTopic,
    set: SetLabel,
    summarizer: &Summarizer,
    acronyms: &AcronymTable,
) -> Result<SetRun, String> {
    let topic = t.topic.as_ref().map_err(Clone::clone)?;
    let (cluster, history) = match set {
        SetLabel::A => (&t.a, Ok(History::empty())),
        SetLabel::B => (&t.b, t.history()),
    };
    let cluster = cluster.as_ref().map_err(Clone::clone)?;
    summarizer
        .summarize_set(topic, cluster, &history?, acronyms)
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ManifestSet {
    set: SetLabel,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    words: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    novelty_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    candidates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    history_size: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    selected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct ManifestTopic {
    topic_id: String,
    sets: Vec<ManifestSet>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    topics: Vec<ManifestTopic>,
}

#[derive(Serialize)]
struct Timings {
    total_ms: u128,
    topics: BTreeMap<String, u128>,
}

pub fn summary_file_name(key: &SummaryKey) -> String {
    format!("{}.{}.txt", key.topic_id, key.set)
}

/// Counts of one written run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunTally {
    pub summaries: usize,
    pub failures: usize,
}

impl RunTally {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failures > 0)
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Writes summaries, `manifest.json`, `run.conf` and `timings.json` into
/// `dir`. Everything except `timings.json` is a pure function of the config
/// and the corpus.
pub fn write_run(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    outcomes: &[TopicOutcome],
    total: Duration,
) -> CliResult<RunTally> {
    ensure_dir(dir)?;
    let mut tally = RunTally::default();
    let mut topics = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        let mut sets = Vec::new();
        for s in &outcome.sets {
            let key = SummaryKey::new(outcome.topic_id.clone(), s.set);
            let path = dir.join(summary_file_name(&key));
            match &s.result {
                Ok(run) => {
                    write_file(&path, &format!("{}\n", run.summary.final_text))?;
                    tally.summaries += 1;
                    sets.push(ManifestSet {
                        set: s.set,
                        status: "ok",
                        file: Some(summary_file_name(&key)),
                        words: Some(run.summary.word_count),
                        novelty_factor: Some(run.novelty_factor),
                        candidates: Some(run.candidate_count),
                        history_size: Some(run.history_size),
                        selected: run
                            .selected
                            .iter()
                            .map(|x| format!("{}#{}", x.sentence.doc_id, x.sentence.index))
                            .collect(),
                        error: None,
                    });
                }
                Err(e) => {
                    if path.exists() {
                        fs::remove_file(&path).map_err(|err| CliError::io(&path, err))?;
                    }
                    tally.failures += 1;
                    sets.push(ManifestSet {
                        set: s.set,
                        status: "error",
                        file: None,
                        words: None,
                        novelty_factor: None,
                        candidates: None,
                        history_size: None,
                        selected: Vec::new(),
                        error: Some(e.clone()),
                    });
                }
            }
        }
        topics.push(ManifestTopic {
            topic_id: outcome.topic_id.clone(),
            sets,
            warnings: outcome
                .warnings
                .iter()
                .map(|w| format!("{}: {}", w.path.display(), w.reason))
                .collect(),
        });
    }
    let manifest = Manifest {
        tool: "updsum",
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        topics,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|source| CliError::Json {
        what: "manifest",
        source,
    })?;
    write_file(&dir.join("manifest.json"), &format!("{json}\n"))?;
    write_file(&dir.join("run.conf"), &config.to_conf())?;
    let timings = Timings {
        total_ms: total.as_millis(),
        topics: outcomes
            .iter()
            .map(|o| (o.topic_id.clone(), o.elapsed.as_millis()))
            .collect(),
    };
    let json = serde_json::to_string_pretty(&timings).map_err(|source| CliError::Json {
        what: "timings",
        source,
    })?;
    write_file(&dir.join("timings.json"), &format!("{json}\n"))?;
    Ok(tally)
}

/// Everything needed to summarize one corpus repeatedly.
pub struct Session {
    pub config: RunConfig,
    pub resources: Resources,
    pub corpus: Corpus,
    pub pool: rayon::ThreadPool,
}

impl Session {
    pub fn open(config: RunConfig) -> CliResult<Self> {
        let resources = Resources::load(&config.resources)?;
        let corpus = load_corpus(&config.data_root)?;
        let pool = thread_pool(config.jobs)?;
        Ok(Self {
            config,
            resources,
            corpus,
            pool,
        })
    }

    pub fn summarizer(&self, config: &RunConfig) -> CliResult<Summarizer> {
        Summarizer::new(self.resources.clone(), config.ranking()).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn prepare(&self, topics: &[LoadedTopic]) -> Vec<PreparedTopic> {
        prepare(topics, &self.resources, &self.pool)
    }

    pub fn references(&self) -> CliResult<BTreeMap<SummaryKey, Vec<String>>> {
        let dir = CorpusLayout::new(&self.config.data_root).refs_dir();
        if dir.is_dir() {
            Ok(load_references(&dir)?)
        } else {
            Ok(BTreeMap::new())
        }
    }
}

/// Summarizes sets A and B of every topic and writes the run to
/// `config.output_dir`.
pub fn cmd_summarize(config: RunConfig) -> CliResult<RunTally> {
    let start = Instant::now();
    let session = Session::open(config)?;
    let summarizer = session.summarizer(&session.config)?;
    let prepared = session.prepare(&session.corpus.topics);
    let outcomes = summarize_prepared(
        &prepared,
        &summarizer,
        &session.corpus.acronyms,
        &[SetLabel::A, SetLabel::B],
        &session.pool,
    );
    let tally = write_run(
        &session.config.output_dir,
        "summarize",
        &session.config,
        &outcomes,
        start.elapsed(),
    )?;
    log::info!(
        "wrote {} summaries ({} failed) in {:.2?}",
        tally.summaries,
        tally.failures,
        start.elapsed()
    );
    Ok(tally)
}

/// Reads `<topic>.<A|B>.txt` files from a run directory.
pub fn read_summaries(dir: &Path) -> CliResult<BTreeMap<SummaryKey, String>> {
    let mut found = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let Some(stem) = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_suffix(".txt"))
        else {
            continue;
        };
        let Some((topic, set)) = stem.rsplit_once('.') else {
            continue;
        };
        let Ok(set) = set.parse::<SetLabel>() else {
            continue;
        };
        if topic.contains('.') {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        found.insert(SummaryKey::new(topic, set), text.trim().to_string());
    }
    Ok(found)
}

/// Scores a run directory and writes `rouge.csv` and `rouge.txt` into it.
pub fn evaluate_dir(
    run_dir: &Path,
    references: &BTreeMap<SummaryKey, Vec<String>>,
) -> CliResult<RougeReport> {
    let summaries = read_summaries(run_dir)?;
    if !summaries.keys().any(|k| references.contains_key(k)) {
        return Err(CliError::Failed(format!(
            "no summary in {} has matching references",
            run_dir.display()
        )));
    }
    let report = evaluate_run(&summaries, references);
    write_file(&run_dir.join("rouge.csv"), &report.to_csv())?;
    write_file(&run_dir.join("rouge.txt"), &report.to_table())?;
    Ok(report)
}

pub fn cmd_evaluate(config: &RunConfig, refs_dir: Option<PathBuf>) -> CliResult<RougeReport> {
    let dir = refs_dir.unwrap_or_else(|| CorpusLayout::new(&config.data_root).refs_dir());
    if !dir.is_dir() {
        return Err(CliError::Failed(format!("reference directory {} not found", dir.display())));
    }
    let references = load_references(&dir)?;
    evaluate_dir(&config.output_dir, &references)
}
