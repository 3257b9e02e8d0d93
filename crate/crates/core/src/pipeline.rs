//! One topic end to end: set A with an empty history, then set B with A as
//! history.

use serde::Serialize;

use crate::assembly::{AcronymTable, PostProcessor, Summary};
use crate::corpus::{build_history, Cluster, History, Topic};
use crate::error::Result;
use crate::preprocess::ProcessedCluster;
use crate::ranking::{novelty_factor, rank_cluster, select_sentences, RankingConfig, ScoredSentence};
pub use crate::resources::Resources;

/// Outcome of summarizing one document set.
#[derive(Clone, Debug, Serialize)]
pub struct SetRun {
    pub summary: Summary,
    /// Sentences admitted by selection, in rank order, before assembly.
    pub selected: Vec<ScoredSentence>,
    pub candidate_count: usize,
    pub history_size: usize,
    pub novelty_factor: f64,
}

#[derive(Clone, Debug)]
pub struct Summarizer {
    resources: Resources,
    config: RankingConfig,
}

impl Summarizer {
    pub fn new(resources: Resources, config: RankingConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { resources, config })
    }

    pub fn config(&self) -> &RankingConfig {
        &self.config
    }

    pub fn resources(&self) -> &Resources {
        &self.resources
    }

    /// Fills in `topic.query_tokens` from its title and narrative.
    pub fn prepare_topic(&self, topic: &mut Topic) {
        self.resources.preprocessor.process_topic(topic);
    }

    pub fn process(&self, cluster: Cluster) -> ProcessedCluster {
        self.resources.preprocessor.process_cluster(cluster)
    }

    pub fn summarize_set(
        &self,
        topic: &Topic,
        cluster: &ProcessedCluster,
        history: &History,
        acronyms: &AcronymTable,
    ) -> Result<SetRun> {
        let ranked = rank_cluster(&cluster.sentences, topic, history, &self.config);
        let selected = select_sentences(&ranked, &self.config);
        let post = PostProcessor::new(
            &self.resources.temporal,
            &self.resources.markers,
            acronyms,
            self.config.word_budget,
        );
        let summary = post.assemble(&topic.id, cluster.cluster.set_label, &selected)?;
        Ok(SetRun {
            summary,
            selected,
            candidate_count: cluster.sentences.len(),
            history_size: history.sentences.len(),
            novelty_factor: novelty_factor(history, &self.config),
        })
    }

    /// Summarizes A with an empty history, then B (if given) with A's
    /// sentences as history. `topic` must already be prepared.
    pub fn summarize_topic(
        &self,
        topic: &Topic,
        a: Cluster,
        b: Option<Cluster>,
        acronyms: &AcronymTable,
    ) -> (Result<SetRun>, Option<Result<SetRun>>) {
        let a = self.process(a);
        let run_a = self.summarize_set(topic, &a, &History::empty(), acronyms);
        let run_b = b.map(|b| {
            let history = build_history(std::slice::from_ref(&a));
            self.summarize_set(topic, &self.process(b), &history, acronyms)
        });
        (run_a, run_b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, SetLabel};
    use chrono::NaiveDate;

    fn doc(id: &str, day: u32, body: &str) -> Document {
        Document {
            id: id.into(),
            timestamp: NaiveDate::from_ymd_opt(2005, 9, day).unwrap(),
            headline: None,
            body: body.into(),
            cluster_id: "D1".into(),
        }
    }

    #[test]
    fn b_avoids_what_a_already_said() {
        let s = Summarizer::new(Resources::builtin(), RankingConfig::default()).unwrap();
        let mut topic = Topic::new("D1", "Arctic ice melting", "Describe the melting of Arctic ice.");
        s.prepare_topic(&mut topic);
        let old = "Arctic ice is melting faster than ever before.";
        let a = Cluster::new("D1-A", SetLabel::A, vec![doc("a1", 1, old)]);
        let b = Cluster::new(
            "D1-B",
            SetLabel::B,
            vec![doc("b1", 20, &format!("{old} Scientists expect the Arctic ice melting to continue."))],
        );
        let (ra, rb) = s.summarize_topic(&topic, a, Some(b), &AcronymTable::new());
        let ra = ra.unwrap();
        let rb = rb.unwrap().unwrap();
        assert_eq!(ra.summary.final_text, old);
        assert_eq!(ra.novelty_factor, 1.0);
        assert_eq!(rb.novelty_factor, 0.5);
        assert_eq!(rb.summary.final_text, "Scientists expect the Arctic ice melting to continue.");
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = RankingConfig {
            redundancy_threshold: 2.0,
            ..Default::default()
        };
        assert!(Summarizer::new(Resources::builtin(), cfg).is_err());
    }
}
