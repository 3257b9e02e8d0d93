//! Fixtures shared by the criterion benches.

use updsum_core::corpus::build_history;
use updsum_core::synth::{generate, SynthSpec};
use updsum_core::{History, ProcessedCluster, Resources, Summarizer, Topic};

/// One prepared topic: query tokens, processed B cluster and A history.
pub struct TopicFixture {
    pub topic: Topic,
    pub candidates: ProcessedCluster,
    pub history: History,
}

pub fn topic_fixture(docs_per_set: usize, sentences_per_doc: usize) -> TopicFixture {
    let spec = SynthSpec {
        topics: 1,
        docs_per_set,
        sentences_per_doc,
        ..SynthSpec::default()
    };
    let corpus = generate(&spec).expect("valid synthetic spec");
    let t = corpus.topics.into_iter().next().expect("one topic");
    let summarizer = Summarizer::new(Resources::builtin(), Default::default()).expect("default config");
    let mut topic = t.topic;
    summarizer.prepare_topic(&mut topic);
    let a = summarizer.process(t.a);
    TopicFixture {
        topic,
        candidates: summarizer.process(t.b),
        history: build_history(std::slice::from_ref(&a)),
    }
}

/// Processed token lists of the fixture's candidate sentences.
pub fn token_lists(fixture: &TopicFixture) -> Vec<Vec<String>> {
    fixture.candidates.sentences.iter().map(|s| s.tokens.clone()).collect()
}
