//! Seeded synthetic corpora for tests, benchmarks and experiments.
//!
//! Words are random letter strings checked against the built-in lexicon and
//! stoplist so that preprocessing leaves them untouched. Two vocabulary
//! modes exist:
//!
//! * [`Vocabulary::Disjoint`]: every topic draws its letters from its own
//!   alphabet, so sentences of different topics share no characters and all
//!   cross-topic similarities are exactly zero. At most four topics.
//! * [`Vocabulary::Shared`]: topics mix their own words with a common pool.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{format_plain_document, format_topic, Cluster, CorpusLayout, Document, SetLabel, SummaryKey, Topic};
use crate::error::{Error, Result};
use crate::preprocess::month_number;
use crate::resources::Resources;

const ALPHABETS: [&str; 4] = ["abcdef", "ghijkl", "mnopqr", "stuvwx"];
const FULL_ALPHABET: &str = "abcdefghijklmnopqrstuvwxyz";
const GLUE: [&str; 6] = ["the", "of", "and", "in", "to", "a"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vocabulary {
    Disjoint,
    Shared,
}

#[derive(Clone, Debug)]
pub struct SynthSpec {
    pub topics: usize,
    pub docs_per_set: usize,
    pub sentences_per_doc: usize,
    /// Inclusive range of content words per sentence.
    pub words_per_sentence: (usize, usize),
    pub vocabulary: Vocabulary,
    /// Fraction of B sentences that paraphrase an A sentence.
    pub b_rewrite_fraction: f64,
    pub references_per_set: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            topics: 48,
            docs_per_set: 10,
            sentences_per_doc: 30,
            words_per_sentence: (10, 22),
            vocabulary: Vocabulary::Shared,
            b_rewrite_fraction: 0.2,
            references_per_set: 4,
            seed: 2008,
        }
    }
}

impl SynthSpec {
    /// Four topics with pairwise disjoint alphabets.
    pub fn disjoint_fixture(seed: u64) -> Self {
        Self {
            topics: 4,
            docs_per_set: 10,
            sentences_per_doc: 8,
            vocabulary: Vocabulary::Disjoint,
            seed,
            ..Self::default()
        }
    }

    /// Topics sharing a common word pool, including one query word.
    pub fn shared_fixture(seed: u64) -> Self {
        Self {
            topics: 6,
            docs_per_set: 10,
            sentences_per_doc: 8,
            vocabulary: Vocabulary::Shared,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthTopic {
    pub topic: Topic,
    pub a: Cluster,
    pub b: Cluster,
    pub references: BTreeMap<SetLabel, Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub topics: Vec<SynthTopic>,
}

struct WordSource<'a> {
    resources: &'a Resources,
    used: BTreeSet<String>,
}

impl WordSource<'_> {
    fn fresh(&mut self, rng: &mut ChaCha8Rng, alphabet: &str) -> String {
        let letters: Vec<char> = alphabet.chars().collect();
        loop {
            let len = rng.gen_range(5..=9);
            let word: String = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            let pre = &self.resources.preprocessor;
            if self.used.contains(&word)
                || pre.stoplist.contains(&word)
                || pre.lexicon.normalize(&word) != word
                || month_number(&word).is_some()
            {
                continue;
            }
            self.used.insert(word.clone());
            return word;
        }
    }

    fn many(&mut self, rng: &mut ChaCha8Rng, alphabet: &str, n: usize) -> Vec<String> {
        (0..n).map(|_| self.fresh(rng, alphabet)).collect()
    }
}

struct TopicWords {
    query: Vec<String>,
    core: Vec<String>,
    filler: Vec<String>,
}

fn sentence(rng: &mut ChaCha8Rng, words: &TopicWords, pool: &[String], spec: &SynthSpec) -> String {
    let n = rng.gen_range(spec.words_per_sentence.0..=spec.words_per_sentence.1);
    let mut out: Vec<String> = Vec::with_capacity(n + n / 3);
    for _ in 0..n {
        let roll: f64 = rng.gen();
        let word = if roll < 0.15 {
            words.query.choose(rng).unwrap()
        } else if roll < 0.45 {
            words.core.choose(rng).unwrap()
        } else if !pool.is_empty() && roll < 0.75 {
            pool.choose(rng).unwrap()
        } else {
            words.filler.choose(rng).unwrap()
        };
        out.push(word.clone());
        if rng.gen_bool(0.25) {
            out.push(GLUE.choose(rng).unwrap().to_string());
        }
    }
    if GLUE.contains(&out.last().unwrap().as_str()) {
        out.pop();
    }
    finish(out)
}

fn finish(words: Vec<String>) -> String {
    let mut text = words.join(" ");
    if let Some(first) = text.get(..1) {
        let upper = first.to_uppercase();
        text.replace_range(..1, &upper);
    }
    text.push('.');
    text
}

/// Swaps one content word of an existing sentence.
fn paraphrase(rng: &mut ChaCha8Rng, original: &str, words: &TopicWords) -> String {
    let mut tokens: Vec<String> = original
        .trim_end_matches('.')
        .split_whitespace()
        .map(str::to_lowercase)
        .collect();
    let slot = rng.gen_range(0..tokens.len());
    tokens[slot] = words.core.choose(rng).unwrap().clone();
    finish(tokens)
}

#[allow(clippy::too_many_arguments)]
fn build_cluster(
    rng: &mut ChaCha8Rng,
    topic_id: &str,
    set: SetLabel,
    start: NaiveDate,
    words: &TopicWords,
    pool: &[String],
    prior: &[String],
    spec: &SynthSpec,
) -> (Cluster, Vec<String>) {
    let mut documents = Vec::with_capacity(spec.docs_per_set);
    let mut all = Vec::new();
    for d in 0..spec.docs_per_set {
        let mut sentences = Vec::with_capacity(spec.sentences_per_doc);
        for _ in 0..spec.sentences_per_doc {
            let s = if !prior.is_empty() && rng.gen_bool(spec.b_rewrite_fraction) {
                let original = prior.choose(rng).unwrap().clone();
                paraphrase(rng, &original, words)
            } else {
                sentence(rng, words, pool, spec)
            };
            sentences.push(s);
        }
        all.extend(sentences.iter().cloned());
        documents.push(Document {
            id: format!("{topic_id}{set}.{d:03}"),
            timestamp: start + Days::new(d as u64),
            headline: None,
            body: sentences.join(" "),
            cluster_id: format!("{topic_id}-{set}"),
        });
    }
    (Cluster::new(format!("{topic_id}-{set}"), set, documents), all)
}

fn references(rng: &mut ChaCha8Rng, sentences: &[String], count: usize) -> Vec<String> {
    (0..count)
        .map(|_| {
            let mut picked = Vec::new();
            let mut words = 0;
            for s in sentences.choose_multiple(rng, sentences.len()) {
                let n = s.split_whitespace().count();
                if words + n > 100 {
                    continue;
                }
                words += n;
                picked.push(s.as_str());
            }
            picked.join(" ")
        })
        .collect()
}

/// Generates a corpus; the same settings always yield the same corpus.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus> {
    if spec.vocabulary == Vocabulary::Disjoint && spec.topics > ALPHABETS.len() {
        return Err(Error::InvalidParameter(format!(
            "disjoint vocabularies support at most {} topics",
            ALPHABETS.len()
        )));
    }
    if spec.topics == 0 || spec.docs_per_set == 0 || spec.sentences_per_doc == 0 {
        return Err(Error::InvalidParameter("synthetic corpus dimensions must be positive".into()));
    }
    if spec.words_per_sentence.0 == 0 || spec.words_per_sentence.0 > spec.words_per_sentence.1 {
        return Err(Error::InvalidParameter("bad words-per-sentence range".into()));
    }
    let resources = Resources::builtin();
    let mut source = WordSource {
        resources: &resources,
        used: BTreeSet::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (pool, shared_query) = match spec.vocabulary {
        Vocabulary::Disjoint => (Vec::new(), None),
        Vocabulary::Shared => {
            let pool = source.many(&mut rng, FULL_ALPHABET, 300);
            let shared = pool[0].clone();
            (pool, Some(shared))
        }
    };
    let base = NaiveDate::from_ymd_opt(2005, 3, 1).expect("valid date");
    let mut topics = Vec::with_capacity(spec.topics);
    for t in 0..spec.topics {
        let alphabet = match spec.vocabulary {
            Vocabulary::Disjoint => ALPHABETS[t % ALPHABETS.len()],
            Vocabulary::Shared => FULL_ALPHABET,
        };
        let mut query = source.many(&mut rng, alphabet, 5);
        if let Some(shared) = &shared_query {
            query.push(shared.clone());
        }
        let words = TopicWords {
            query,
            core: source.many(&mut rng, alphabet, 40),
            filler: source.many(&mut rng, alphabet, 120),
        };
        let id = format!("S{:03}", t + 1);
        let title = words.query[..2].join(" ");
        let narrative = format!("{} {}.", capitalized(&words.query[2]), words.query[3..].join(" "));
        let start_a = base + Days::new(40 * t as u64);
        let (a, a_sentences) = build_cluster(&mut rng, &id, SetLabel::A, start_a, &words, &pool, &[], spec);
        let start_b = start_a + Days::new(spec.docs_per_set as u64 + 5);
        let (b, b_sentences) =
            build_cluster(&mut rng, &id, SetLabel::B, start_b, &words, &pool, &a_sentences, spec);
        let refs = BTreeMap::from([
            (SetLabel::A, references(&mut rng, &a_sentences, spec.references_per_set)),
            (SetLabel::B, references(&mut rng, &b_sentences, spec.references_per_set)),
        ]);
        topics.push(SynthTopic {
            topic: Topic::new(id, title, narrative),
            a,
            b,
            references: refs,
        });
    }
    Ok(SynthCorpus { topics })
}

fn capitalized(word: &str) -> String {
    let mut chars = word.chars();
    chars
        .next()
        .map(|c| c.to_uppercase().chain(chars).collect())
        .unwrap_or_default()
}

impl SynthCorpus {
    /// Writes the corpus in the standard on-disk layout.
    pub fn write(&self, root: &Path) -> Result<()> {
        let layout = CorpusLayout::new(root);
        let mkdir = |p: &Path| fs::create_dir_all(p).map_err(|e| Error::io(p, e));
        let write = |p: &Path, text: &str| fs::write(p, text).map_err(|e| Error::io(p, e));
        mkdir(&layout.topics_dir())?;
        mkdir(&layout.refs_dir())?;
        for t in &self.topics {
            write(&layout.topic_file(&t.topic.id), &format_topic(&t.topic))?;
            for cluster in [&t.a, &t.b] {
                let dir = layout.cluster_dir(&t.topic.id, cluster.set_label);
                mkdir(&dir)?;
                for doc in &cluster.documents {
                    write(&dir.join(format!("{}.txt", doc.id)), &format_plain_document(doc))?;
                }
            }
            for (set, refs) in &t.references {
                let key = SummaryKey::new(t.topic.id.clone(), *set);
                for (i, text) in refs.iter().enumerate() {
                    let annotator = char::from(b'A' + i as u8).to_string();
                    write(&layout.reference_file(&key, &annotator), &format!("{text}\n"))?;
                }
            }
        }
        Ok(())
    }
}
