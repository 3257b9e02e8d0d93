use chrono::NaiveDate;
use updsum_core::assembly::{mine_acronyms, PostProcessor};
use updsum_core::ranking::select_sentences;
use updsum_core::{Cluster, Document, RankingConfig, Resources, ScoredSentence, SetLabel};

fn doc(id: &str, date: (i32, u32, u32), body: &str) -> Document {
    Document {
        id: id.to_string(),
        timestamp: NaiveDate::from_ymd_opt(date.0, date.1, date.2).unwrap(),
        headline: None,
        body: body.to_string(),
        cluster_id: "D0646A".to_string(),
    }
}

const CLINTON: &str = "WASHINGTON _ A federal judge Monday found President Clinton in civil contempt of court for lying in a deposition about the nature of his sexual relationship with former White House intern Monica S. Lewinsky. Clinton, in a January 1998 deposition in the Paula Jones sexual harassment case, swore that he did not have a sexual relationship with Lewinsky. Clinton later explained that he did not believe he had lied in the case because the type of sex he had with Lewinsky did not fall under the definition of sexual relations used in the case.";

#[test]
fn clinton_passage_preprocesses_to_expected_rows() {
    let resources = Resources::builtin();
    let sentences = resources
        .preprocessor
        .process_document(&doc("NYT19990412.0403", (1999, 4, 12), CLINTON), 0);
    let raw: Vec<&str> = sentences.iter().map(|s| s.raw.as_str()).collect();
    assert_eq!(
        raw,
        [
            "A federal judge Monday found President Clinton in civil contempt of court for lying in a deposition about the nature of his sexual relationship with former White House intern Monica S. Lewinsky.",
            "Clinton, in a January 1998 deposition in the Paula Jones sexual harassment case, swore that he did not have a sexual relationship with Lewinsky.",
            "Clinton later explained that he did not believe he had lied in the case because the type of sex he had with Lewinsky did not fall under the definition of sexual relations used in the case.",
        ]
    );
    let processed: Vec<String> = sentences.iter().map(|s| s.tokens.join(" ")).collect();
    assert_eq!(
        processed,
        [
            "federal judge monday find president clinton civil contempt court lie deposition nature sex relation former white house intern monica lewinsky",
            "clinton 01_1998 _january_ _1998_ deposition paula jones sex harassment case swear sex relation lewinsky",
            "clinton late explain believe lie case type sex lewinsky fall define sex relation use case",
        ]
    );
}

#[test]
fn arctic_passage_assembles_from_97_to_95_words() {
    let resources = Resources::builtin();
    let panel = doc(
        "APW20050928.0101",
        (2005, 9, 28),
        "The rate of ice melting in the Arctic is increasing and a panel of researchers says it sees no natural process that is likely to change that trend. For example, the white sea ice reflects solar radiation back into space, but as the ice melts the dark water will absorb some of the light, warming and melting more ice.",
    );
    let report = doc(
        "APW20050930.0207",
        (2005, 9, 30),
        "Last month, U.S. scientists issued a report saying the rate of ice melting in the Arctic is increasing and within a century could lead to summertime ice-free ocean conditions not seen in the area in a million years.",
    );
    let cluster = Cluster::new("D0001-B", SetLabel::B, vec![report, panel]);
    let acronyms = mine_acronyms(std::slice::from_ref(&cluster));
    let processed = resources.preprocessor.process_cluster(cluster);
    assert_eq!(processed.sentences.len(), 3);

    // rank order as printed before assembly: report, panel, white sea ice
    let by_start = |prefix: &str| {
        processed
            .sentences
            .iter()
            .find(|s| s.raw.starts_with(prefix))
            .unwrap()
            .clone()
    };
    let ranked: Vec<ScoredSentence> = [("Last month", 0.9), ("The rate", 0.8), ("For example", 0.7)]
        .into_iter()
        .map(|(p, score)| ScoredSentence {
            sentence: by_start(p),
            sim1: score,
            max_hist_sim2: 0.0,
            score,
        })
        .collect();
    let cfg = RankingConfig::default();
    let selected = select_sentences(&ranked, &cfg);
    assert_eq!(selected.len(), 3);
    let raw_words: usize = selected.iter().map(|s| s.sentence.word_count).sum();
    assert_eq!(raw_words, 97);

    let post = PostProcessor::new(&resources.temporal, &resources.markers, &acronyms, cfg.word_budget);
    let summary = post.assemble("D0001", SetLabel::B, &selected).unwrap();
    assert_eq!(
        summary.final_text,
        "The rate of ice melting in the Arctic is increasing and a panel of researchers says it sees no natural process that is likely to change that trend. The white sea ice reflects solar radiation back into space, but as the ice melts the dark water will absorb some of the light, warming and melting more ice. In 08/2005, US scientists issued a report saying the rate of ice melting in the Arctic is increasing and within a century could lead to summertime ice-free ocean conditions not seen in the area in a million years."
    );
    assert_eq!(summary.word_count, 95);
}
