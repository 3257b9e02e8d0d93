//! Query-oriented multi-document update summarization.
//!
//! The pipeline has four stages, each in its own module:
//!
//! 1. [`preprocess`]: sentence splitting, token filtering, date and word
//!    normalization.
//! 2. [`ranking`]: sentences are scored against the topic query with a
//!    cosine / extended Jaro-Winkler blend and penalized by their maximum
//!    normalized longest-common-substring overlap with the history
//!    (previously read clusters). The penalty exponent is the novelty factor.
//! 3. [`assembly`]: greedy selection under the word budget, then rule-based
//!    rewrites (acronyms, dates, temporal references, discourse markers,
//!    say clauses) and chronological ordering.
//! 4. [`rouge`]: ROUGE-N and ROUGE-SU4 recall against reference summaries.
//!
//! [`pipeline`] ties the stages together for one topic, and [`corpus`]
//! handles loading documents, topics and references from disk.

pub mod assembly;
pub mod corpus;
pub mod error;
pub mod pipeline;
pub mod preprocess;
pub mod ranking;
pub mod resources;
pub mod rouge;
pub mod similarity;
pub mod synth;

pub use assembly::{AcronymTable, PostProcessor, Summary, SummarySentence};
pub use corpus::{Cluster, CorpusLayout, Document, History, SetLabel, SummaryKey, Topic};
pub use error::{Error, Result};
pub use pipeline::{SetRun, Summarizer};
pub use preprocess::{Lexicon, Preprocessor, ProcessedCluster, Sentence, Stoplist};
pub use resources::{ResourcePaths, Resources};
pub use ranking::{RankingConfig, ScoredSentence, Scorer};
pub use rouge::{RougeReport, RougeScores};
