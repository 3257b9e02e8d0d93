//! Topics, document clusters, reference summaries and the reading history.
//!
//! Two document formats are understood:
//!
//! * a minimal XML subset: `<DOC id="...">` with optional `<HEADLINE>` and
//!   `<DATELINE>YYYY-MM-DD</DATELINE>`, and a `<TEXT>` made of `<P>`
//!   paragraphs (several `DOC` elements may share a file);
//! * plain text whose first line is `id<TAB>YYYY-MM-DD`.
//!
//! When an XML document has no usable dateline, the 8-digit date embedded in
//! AQUAINT-style ids (`NYT19990412.0403`) is used instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::LazyLock;

use chrono::NaiveDate;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::{ProcessedCluster, Sentence};

/// Which chronological document set of a topic a cluster is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SetLabel {
    A,
    B,
}

impl SetLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SetLabel::A => "A",
            SetLabel::B => "B",
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(SetLabel::A),
            "B" | "b" => Ok(SetLabel::B),
            other => Err(Error::InvalidParameter(format!("unknown document set `{other}`"))),
        }
    }
}

/// Identifies one summary: a topic and one of its document sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SummaryKey {
    pub topic_id: String,
    pub set: SetLabel,
}

impl SummaryKey {
    pub fn new(topic_id: impl Into<String>, set: SetLabel) -> Self {
        Self {
            topic_id: topic_id.into(),
            set,
        }
    }
}

impl fmt::Display for SummaryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.topic_id, self.set)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub timestamp: NaiveDate,
    pub headline: Option<String>,
    pub body: String,
    pub cluster_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: String,
    pub set_label: SetLabel,
    /// Sorted ascending by `(timestamp, id)`.
    pub documents: Vec<Document>,
}

impl Cluster {
    pub fn new(id: impl Into<String>, set_label: SetLabel, mut documents: Vec<Document>) -> Self {
        documents.sort_by(|a, b| (a.timestamp, &a.id).cmp(&(b.timestamp, &b.id)));
        Self {
            id: id.into(),
            set_label,
            documents,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: String,
    pub title: String,
    pub narrative: String,
    /// Filled by [`crate::preprocess::Preprocessor::process_topic`].
    pub query_tokens: Vec<String>,
}

impl Topic {
    pub fn new(id: impl Into<String>, title: impl Into<String>, narrative: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            narrative: narrative.into(),
            query_tokens: Vec::new(),
        }
    }

    /// Cluster ids are the topic id followed by a set suffix (`D0802A-B`).
    pub fn governs(&self, cluster_id: &str) -> bool {
        cluster_id.starts_with(&self.id)
    }

    /// Raw query text: title followed by narrative.
    pub fn query_text(&self) -> String {
        if self.title.is_empty() {
            self.narrative.clone()
        } else {
            format!("{}. {}", self.title, self.narrative)
        }
    }
}

/// Sentences the reader has already seen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct History {
    pub sentences: Vec<Sentence>,
    /// Number of document sets seen including the one being summarized
    /// (1 for set A, 2 for set B).
    pub source_cluster_count: usize,
}

impl History {
    pub fn empty() -> Self {
        Self {
            sentences: Vec::new(),
            source_cluster_count: 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Union of the processed sentences of every prior cluster.
///
/// Clusters are deduplicated by id and sentences by `(doc_id, index)`, so the
/// result does not depend on the order or multiplicity of `prior`.
pub fn build_history(prior: &[ProcessedCluster]) -> History {
    let cluster_ids: BTreeSet<&str> = prior.iter().map(|p| p.cluster.id.as_str()).collect();
    let mut store: BTreeMap<(&str, usize), &Sentence> = BTreeMap::new();
    for sentence in prior.iter().flat_map(|p| p.sentences.iter()) {
        store
            .entry((sentence.doc_id.as_str(), sentence.index))
            .or_insert(sentence);
    }
    History {
        sentences: store.into_values().cloned().collect(),
        source_cluster_count: cluster_ids.len() + 1,
    }
}

/// A file that was skipped while loading a cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoadWarning {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct ClusterLoad {
    pub cluster: Cluster,
    pub warnings: Vec<LoadWarning>,
}

/// Loads every document file in `dir`. The cluster id is the directory name.
///
/// Files that fail to parse are skipped and reported in
/// [`ClusterLoad::warnings`]; the call only fails when no document survives.
pub fn load_cluster(dir: &Path, set_label: SetLabel) -> Result<ClusterLoad> {
    let cluster_id = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && !is_hidden(p))
        .collect();
    files.sort();

    let mut documents: Vec<Document> = Vec::new();
    let mut warnings = Vec::new();
    for path in files {
        let parsed = fs::read(&path)
            .map_err(|e| e.to_string())
            .and_then(|bytes| String::from_utf8(bytes).map_err(|e| e.to_string()))
            .and_then(|text| parse_documents(&text, &cluster_id).map_err(|e| e.to_string()));
        match parsed {
            Ok(docs) => {
                for doc in docs {
                    if documents.iter().any(|d| d.id == doc.id) {
                        warnings.push(LoadWarning {
                            path: path.clone(),
                            reason: format!("duplicate document id {}", doc.id),
                        });
                    } else {
                        documents.push(doc);
                    }
                }
            }
            Err(reason) => {
                log::warn!("skipping {}: {reason}", path.display());
                warnings.push(LoadWarning {
                    path: path.clone(),
                    reason,
                });
            }
        }
    }
    if documents.is_empty() {
        return Err(Error::NoDocuments(dir.to_path_buf()));
    }
    Ok(ClusterLoad {
        cluster: Cluster::new(cluster_id, set_label, documents),
        warnings,
    })
}

fn is_hidden(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.starts_with('.'))
}

/// Parses the contents of one document file (XML subset or plain text).
pub fn parse_documents(text: &str, cluster_id: &str) -> std::result::Result<Vec<Document>, String> {
    let trimmed = text.trim_start_matches('\u{feff}').trim_start();
    if trimmed.starts_with('<') {
        parse_xml(trimmed, cluster_id)
    } else {
        parse_plain(trimmed, cluster_id).map(|d| vec![d])
    }
}

static DOC_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?s)<DOC\b([^>]*)>(.*?)</DOC>").unwrap());
static ID_ATTR_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"\bid\s*=\s*"([^"]*)""#).unwrap());
static TAG_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<[^>]*>").unwrap());
static P_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?s)<P>(.*?)</P>").unwrap());
static ID_DATE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:^|\D)(\d{4})(\d{2})(\d{2})(?:\D|$)").unwrap());

fn element<'t>(name: &str, text: &'t str) -> Option<&'t str> {
    let open = format!("<{name}>");
    let close = format!("</{name}>");
    let start = text.find(&open)? + open.len();
    let end = text[start..].find(&close)? + start;
    Some(&text[start..end])
}

fn clean_inline(text: &str) -> String {
    let stripped = TAG_RE.replace_all(text, " ");
    decode_entities(&stripped)
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

fn decode_entities(text: &str) -> String {
    text.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

fn parse_xml(text: &str, cluster_id: &str) -> std::result::Result<Vec<Document>, String> {
    let mut docs = Vec::new();
    for cap in DOC_RE.captures_iter(text) {
        let attrs = &cap[1];
        let inner = &cap[2];
        let id = ID_ATTR_RE
            .captures(attrs)
            .map(|c| c[1].trim().to_string())
            .or_else(|| element("DOCNO", inner).map(|s| s.trim().to_string()))
            .filter(|id| !id.is_empty())
            .ok_or_else(|| "DOC element without an id".to_string())?;
        let headline = element("HEADLINE", inner)
            .map(clean_inline)
            .filter(|h| !h.is_empty());
        let timestamp = element("DATELINE", inner)
            .and_then(|d| NaiveDate::parse_from_str(d.trim(), "%Y-%m-%d").ok())
            .or_else(|| date_from_id(&id))
            .ok_or_else(|| format!("document {id} has no parseable timestamp"))?;
        let body_xml = element("TEXT", inner).ok_or_else(|| format!("document {id} has no TEXT"))?;
        let paragraphs: Vec<String> = if P_RE.is_match(body_xml) {
            P_RE.captures_iter(body_xml)
                .map(|p| clean_inline(&p[1]))
                .filter(|p| !p.is_empty())
                .collect()
        } else {
            vec![clean_inline(body_xml)]
        };
        docs.push(Document {
            id,
            timestamp,
            headline,
            body: paragraphs.join("\n\n"),
            cluster_id: cluster_id.to_string(),
        });
    }
    if docs.is_empty() {
        return Err("no well-formed DOC element".to_string());
    }
    Ok(docs)
}

fn parse_plain(text: &str, cluster_id: &str) -> std::result::Result<Document, String> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let (id, date) = header
        .trim_end_matches('\r')
        .split_once('\t')
        .ok_or_else(|| "plain-text header must be `id<TAB>YYYY-MM-DD`".to_string())?;
    let id = id.trim();
    if id.is_empty() {
        return Err("empty document id".to_string());
    }
    let timestamp = NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d")
        .map_err(|e| format!("bad timestamp `{}`: {e}", date.trim()))?;
    Ok(Document {
        id: id.to_string(),
        timestamp,
        headline: None,
        body: body.trim().to_string(),
        cluster_id: cluster_id.to_string(),
    })
}

/// Extracts the `YYYYMMDD` date embedded in ids such as `NYT19990412.0403`.
pub fn date_from_id(id: &str) -> Option<NaiveDate> {
    ID_DATE_RE.captures_iter(id).find_map(|c| {
        let year = c[1].parse().ok()?;
        let month = c[2].parse().ok()?;
        let day = c[3].parse().ok()?;
        NaiveDate::from_ymd_opt(year, month, day)
    })
}

/// Reads a topic file made of `id:`, `title:` and `narrative:` lines; the
/// narrative runs to the end of the file.
pub fn load_topic(path: &Path) -> Result<Topic> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_topic(&text).map_err(|reason| Error::MalformedTopic {
        path: path.to_path_buf(),
        reason,
    })
}

pub fn parse_topic(text: &str) -> std::result::Result<Topic, String> {
    let mut id = None;
    let mut title = None;
    let mut narrative: Option<String> = None;
    for line in text.lines() {
        if let Some(n) = narrative.as_mut() {
            n.push('\n');
            n.push_str(line);
            continue;
        }
        if let Some(rest) = line.strip_prefix("id:") {
            id = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("title:") {
            title = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("narrative:") {
            narrative = Some(rest.to_string());
        }
    }
    let id = id.filter(|s| !s.is_empty()).ok_or("missing id")?;
    let narrative = narrative
        .map(|n| n.trim().to_string())
        .filter(|n| !n.is_empty())
        .ok_or("missing narrative")?;
    Ok(Topic::new(id, title.unwrap_or_default(), narrative))
}

/// Loads reference summaries named `<topic-id>.<set>.<annotator>.txt`.
/// Files not following the pattern are ignored. Each list is ordered by
/// annotator.
pub fn load_references(dir: &Path) -> Result<BTreeMap<SummaryKey, Vec<String>>> {
    let mut found: BTreeMap<SummaryKey, BTreeMap<String, String>> = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some(stem) = name.strip_suffix(".txt") else {
            continue;
        };
        let parts: Vec<&str> = stem.split('.').collect();
        let [topic, set, annotator] = parts[..] else {
            continue;
        };
        let Ok(set) = set.parse::<SetLabel>() else {
            continue;
        };
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        found
            .entry(SummaryKey::new(topic, set))
            .or_default()
            .insert(annotator.to_string(), text);
    }
    Ok(found
        .into_iter()
        .map(|(k, v)| (k, v.into_values().collect()))
        .collect())
}

/// Directory layout of a corpus on disk:
///
/// ```text
/// <root>/topics/<TOPIC>.topic
/// <root>/clusters/<TOPIC>-A/   <root>/clusters/<TOPIC>-B/
/// <root>/refs/<TOPIC>.<A|B>.<annotator>.txt
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusLayout {
    pub root: PathBuf,
}

impl CorpusLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn topics_dir(&self) -> PathBuf {
        self.root.join("topics")
    }

    pub fn topic_file(&self, topic_id: &str) -> PathBuf {
        self.topics_dir().join(format!("{topic_id}.topic"))
    }

    pub fn cluster_dir(&self, topic_id: &str, set: SetLabel) -> PathBuf {
        self.root.join("clusters").join(format!("{topic_id}-{set}"))
    }

    pub fn refs_dir(&self) -> PathBuf {
        self.root.join("refs")
    }

    pub fn reference_file(&self, key: &SummaryKey, annotator: &str) -> PathBuf {
        self.refs_dir().join(format!("{}.{}.{annotator}.txt", key.topic_id, key.set))
    }

    /// Topic ids found in the topics directory, sorted.
    pub fn topic_ids(&self) -> Result<Vec<String>> {
        let dir = self.topics_dir();
        let mut ids: Vec<String> = fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().to_string_lossy().into_owned();
                name.strip_suffix(".topic").map(str::to_string)
            })
            .collect();
        ids.sort();
        Ok(ids)
    }
}

/// Plain-text document file: `id<TAB>YYYY-MM-DD` header, then the body.
pub fn format_plain_document(doc: &Document) -> String {
    format!("{}\t{}\n{}\n", doc.id, doc.timestamp.format("%Y-%m-%d"), doc.body)
}

pub fn format_topic(topic: &Topic) -> String {
    format!("id: {}\ntitle: {}\nnarrative: {}\n", topic.id, topic.title, topic.narrative)
}
