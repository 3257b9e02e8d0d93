//! ROUGE-N and ROUGE-SU4 recall against multiple references.
//!
//! Counts are pooled over references: the numerator sums clipped matches
//! against each reference, the denominator sums each reference's n-gram
//! total. Texts are lowercased and stripped of punctuation; stopwords are
//! kept and nothing is stemmed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use crate::corpus::SummaryKey;
use crate::corpus::SetLabel;
use crate::error::{Error, Result};

/// Gap limit of the SU4 skip-bigrams.
pub const SU4_MAX_SKIP: usize = 4;

/// Multiset of token tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NGramMultiset {
    counts: HashMap<Vec<String>, usize>,
    total: usize,
}

impl NGramMultiset {
    pub fn insert(&mut self, gram: Vec<String>) {
        *self.counts.entry(gram).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn count<S: AsRef<str>>(&self, gram: &[S]) -> usize {
        let key: Vec<String> = gram.iter().map(|s| s.as_ref().to_string()).collect();
        self.counts.get(&key).copied().unwrap_or(0)
    }

    /// Number of n-grams, with multiplicity.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of distinct n-grams.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[String], usize)> {
        self.counts.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// Sum over n-grams of `min(self, other)`.
    pub fn clipped_overlap(&self, other: &NGramMultiset) -> usize {
        let (small, large) = if self.counts.len() <= other.counts.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .counts
            .iter()
            .map(|(g, &c)| c.min(large.counts.get(g).copied().unwrap_or(0)))
            .sum()
    }

    fn extend(&mut self, other: NGramMultiset) {
        for (g, c) in other.counts {
            *self.counts.entry(g).or_insert(0) += c;
        }
        self.total += other.total;
    }
}

/// Lowercases, splits on whitespace and strips leading and trailing
/// punctuation from every token.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

/// All contiguous `n`-token windows.
///
/// # Panics
/// If `n` is 0.
pub fn ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> NGramMultiset {
    assert!(n >= 1, "n-gram order must be positive");
    let mut set = NGramMultiset::default();
    for w in tokens.windows(n) {
        set.insert(w.iter().map(|t| t.as_ref().to_string()).collect());
    }
    set
}

/// Ordered pairs `(i, j)`, `i < j`, with at most `max_skip` tokens between.
pub fn skip_bigrams<S: AsRef<str>>(tokens: &[S], max_skip: usize) -> NGramMultiset {
    let mut set = NGramMultiset::default();
    for i in 0..tokens.len() {
        for j in i + 1..tokens.len().min(i + max_skip + 2) {
            set.insert(vec![tokens[i].as_ref().to_string(), tokens[j].as_ref().to_string()]);
        }
    }
    set
}

/// Unigrams plus skip-bigrams with gap at most 4.
pub fn su4_grams<S: AsRef<str>>(tokens: &[S]) -> NGramMultiset {
    let mut set = ngrams(tokens, 1);
    set.extend(skip_bigrams(tokens, SU4_MAX_SKIP));
    set
}

fn pooled_recall(candidate: &NGramMultiset, references: &[NGramMultiset], what: &str) -> Result<f64> {
    let denominator: usize = references.iter().map(NGramMultiset::total).sum();
    if denominator == 0 {
        return Err(Error::RougeUndefined(what.to_string()));
    }
    let numerator: usize = references.iter().map(|r| candidate.clipped_overlap(r)).sum();
    Ok(numerator as f64 / denominator as f64)
}

pub fn rouge_n<S: AsRef<str>, R: AsRef<[S]>>(candidate: &[S], references: &[R], n: usize) -> Result<f64> {
    let refs: Vec<NGramMultiset> = references.iter().map(|r| ngrams(r.as_ref(), n)).collect();
    pooled_recall(&ngrams(candidate, n), &refs, &n.to_string())
}

pub fn rouge_su4<S: AsRef<str>, R: AsRef<[S]>>(candidate: &[S], references: &[R]) -> Result<f64> {
    let refs: Vec<NGramMultiset> = references.iter().map(|r| su4_grams(r.as_ref())).collect();
    pooled_recall(&su4_grams(candidate), &refs, "SU4")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeScores {
    pub rouge1: f64,
    pub rouge2: f64,
    pub rouge_su4: f64,
}

impl RougeScores {
    pub const METRICS: [&'static str; 3] = ["ROUGE-1", "ROUGE-2", "ROUGE-SU4"];

    pub fn score(candidate: &str, references: &[String]) -> Result<Self> {
        let cand = tokenize(candidate);
        let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r)).collect();
        Ok(Self {
            rouge1: rouge_n(&cand, &refs, 1)?,
            rouge2: rouge_n(&cand, &refs, 2)?,
            rouge_su4: rouge_su4(&cand, &refs)?,
        })
    }

    pub fn values(&self) -> [f64; 3] {
        [self.rouge1, self.rouge2, self.rouge_su4]
    }

    fn mean<'a>(scores: impl Iterator<Item = &'a RougeScores>) -> Self {
        let mut sum = [0.0; 3];
        let mut n = 0usize;
        for s in scores {
            for (acc, v) in sum.iter_mut().zip(s.values()) {
                *acc += v;
            }
            n += 1;
        }
        if n == 0 {
            return Self::default();
        }
        Self {
            rouge1: sum[0] / n as f64,
            rouge2: sum[1] / n as f64,
            rouge_su4: sum[2] / n as f64,
        }
    }
}

/// Per-summary scores and their plain means. Summaries without usable
/// references are listed in `skipped` and excluded from the means, which
/// are 0 when nothing was scored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RougeReport {
    pub rouge1: f64,
    pub rouge2: f64,
    pub rouge_su4: f64,
    pub per_topic: BTreeMap<SummaryKey, RougeScores>,
    pub skipped: BTreeSet<SummaryKey>,
}

impl RougeReport {
    pub fn from_scores(per_topic: BTreeMap<SummaryKey, RougeScores>, skipped: BTreeSet<SummaryKey>) -> Self {
        let mean = RougeScores::mean(per_topic.values());
        Self {
            rouge1: mean.rouge1,
            rouge2: mean.rouge2,
            rouge_su4: mean.rouge_su4,
            per_topic,
            skipped,
        }
    }

    pub fn means(&self) -> RougeScores {
        RougeScores {
            rouge1: self.rouge1,
            rouge2: self.rouge2,
            rouge_su4: self.rouge_su4,
        }
    }

    /// Report restricted to one document set.
    pub fn for_set(&self, set: SetLabel) -> Self {
        Self::from_scores(
            self.per_topic
                .iter()
                .filter(|(k, _)| k.set == set)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            self.skipped.iter().filter(|k| k.set == set).cloned().collect(),
        )
    }

    /// `topic_id,set,metric,value` records, five decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("topic_id,set,metric,value\n");
        for (key, scores) in &self.per_topic {
            for (metric, value) in RougeScores::METRICS.iter().zip(scores.values()) {
                let _ = writeln!(out, "{},{},{metric},{value:.5}", key.topic_id, key.set);
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:<16} {:>3} {:>9} {:>9} {:>9}\n", "topic", "set", "ROUGE-1", "ROUGE-2", "ROUGE-SU4");
        for (key, s) in &self.per_topic {
            let _ = writeln!(
                out,
                "{:<16} {:>3} {:>9.5} {:>9.5} {:>9.5}",
                key.topic_id, key.set, s.rouge1, s.rouge2, s.rouge_su4
            );
        }
        let _ = writeln!(
            out,
            "{:<16} {:>3} {:>9.5} {:>9.5} {:>9.5}",
            "mean", "", self.rouge1, self.rouge2, self.rouge_su4
        );
        if !self.skipped.is_empty() {
            let names: Vec<String> = self.skipped.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "skipped (no references): {}", names.join(", "));
        }
        out
    }
}

/// Scores every summary against its references.
pub fn evaluate_run(
    summaries: &BTreeMap<SummaryKey, String>,
    references: &BTreeMap<SummaryKey, Vec<String>>,
) -> RougeReport {
    let mut per_topic = BTreeMap::new();
    let mut skipped = BTreeSet::new();
    for (key, text) in summaries {
        let scores = references
            .get(key)
            .ok_or_else(|| Error::RougeUndefined("reference".into()))
            .and_then(|refs| RougeScores::score(text, refs));
        match scores {
            Ok(s) => {
                per_topic.insert(key.clone(), s);
            }
            Err(e) => {
                log::warn!("{key}: skipped ({e})");
                skipped.insert(key.clone());
            }
        }
    }
    RougeReport::from_scores(per_topic, skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn ngram_examples() {
        let g = ngrams(&t("a b c"), 2);
        assert_eq!((g.count(&["a", "b"]), g.count(&["b", "c"]), g.total()), (1, 1, 2));
        assert_eq!(ngrams(&t("a a a"), 1).count(&["a"]), 3);
        assert!(ngrams(&t("a"), 2).is_empty());
    }

    #[test]
    fn skip_bigram_examples() {
        let g = skip_bigrams(&t("a b c"), 4);
        assert_eq!(g.total(), 3);
        assert_eq!(g.count(&["a", "c"]), 1);
        assert_eq!(skip_bigrams(&t("a b"), 0).total(), 1);
        assert_eq!(skip_bigrams(&t("a x x x x x b"), 4).count(&["a", "b"]), 0);
        assert_eq!(skip_bigrams(&t("a x x x x b"), 4).count(&["a", "b"]), 1);
    }

    #[test]
    fn rouge_n_examples() {
        let c = t("a b c x");
        assert_eq!(rouge_n(&c, &[t("a b c d")], 1).unwrap(), 0.75);
        assert_eq!(rouge_n(&c, std::slice::from_ref(&c), 2).unwrap(), 1.0);
        assert_eq!(rouge_n(&t("p q"), &[t("a b")], 1).unwrap(), 0.0);
        // pooled: (3 + 1) / (4 + 2)
        assert!((rouge_n(&c, &[t("a b c d"), t("a z")], 1).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert!(matches!(rouge_n(&c, &[t("a")], 2), Err(Error::RougeUndefined(_))));
        assert!(rouge_n::<String, Vec<String>>(&c, &[], 1).is_err());
    }

    #[test]
    fn su4_examples() {
        let c = t("a b c d");
        assert_eq!(rouge_su4(&c, std::slice::from_ref(&c)).unwrap(), 1.0);
        assert_eq!(rouge_su4(&c, &[t("w x y z")]).unwrap(), 0.0);
        // ref "a b e f": unigrams 4 + pairs 6 = 10; shared: a, b, (a,b) = 3
        assert!((rouge_su4(&c, &[t("a b e f")]).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn tokenization() {
        assert_eq!(tokenize("The U.S. ice-free, \"ocean\"!"), t("the u.s ice-free ocean"));
    }

    #[test]
    fn evaluate_run_means_and_skips() {
        let a = SummaryKey::new("T1", SetLabel::A);
        let b = SummaryKey::new("T2", SetLabel::A);
        let c = SummaryKey::new("T3", SetLabel::B);
        let summaries = BTreeMap::from([
            (a.clone(), "ice melts".to_string()),
            (b.clone(), "riots spread".to_string()),
            (c.clone(), "nothing".to_string()),
        ]);
        let refs = BTreeMap::from([
            (a.clone(), vec!["Ice melts.".to_string()]),
            (b.clone(), vec!["cars burn".to_string()]),
        ]);
        let report = evaluate_run(&summaries, &refs);
        assert_eq!(report.rouge1, 0.5);
        assert_eq!(report.skipped, BTreeSet::from([c]));
        assert_eq!(report.for_set(SetLabel::A).rouge1, 0.5);
        assert!(report.to_csv().starts_with("topic_id,set,metric,value\nT1,A,ROUGE-1,1.00000\n"));
        assert!(report.to_table().contains("skipped"));
    }

    fn tokens() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec(proptest::sample::select(vec!["a", "b", "c", "d", "e"]), 0..20)
            .prop_map(|v| v.into_iter().map(str::to_string).collect())
    }

    proptest! {
        #[test]
        fn scores_are_bounded(c in tokens(), r in proptest::collection::vec(tokens(), 1..4)) {
            for n in 1..=3 {
                if let Ok(v) = rouge_n(&c, &r, n) {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
            if let Ok(v) = rouge_su4(&c, &r) {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn self_reference_is_perfect(c in tokens()) {
            for n in 1..=c.len().min(4) {
                prop_assert_eq!(rouge_n(&c, std::slice::from_ref(&c), n).unwrap(), 1.0);
            }
        }

        #[test]
        fn foreign_token_never_increases_recall(c in tokens(), r in proptest::collection::vec(tokens(), 1..4)) {
            let mut extended = c.clone();
            extended.push("zzz".to_string());
            for n in 1..=2 {
                if let (Ok(before), Ok(after)) = (rouge_n(&c, &r, n), rouge_n(&extended, &r, n)) {
                    prop_assert!(after <= before + 1e-15);
                }
            }
        }

        #[test]
        fn unigram_recall_is_bag_of_words(c in tokens(), r in tokens(), seed in any::<u64>()) {
            let mut shuffled = c.clone();
            let len = shuffled.len();
            for i in (1..len).rev() {
                shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
            }
            prop_assert_eq!(rouge_n(&c, std::slice::from_ref(&r), 1).ok(), rouge_n(&shuffled, &[r], 1).ok());
        }
    }
}
