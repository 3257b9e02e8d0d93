//! Sentence scoring and selection.
//!
//! The default scorer (SMMR) multiplies query relevance by the sentence's
//! novelty with respect to the history:
//!
//! ```text
//! smmr(s) = sim1(s, Q) * (1 - max_{h in H} sim2(s, h)) ^ nf
//! ```
//!
//! where `sim2` is [`lcs_norm`] and the novelty factor `nf` defaults to
//! `1 / c`, `c` being the number of document sets read so far including the
//! current one. Since the penalty only involves the history, every sentence
//! is scored once and no re-ranking is needed.
//!
//! Classic MMR (redundancy against already selected sentences) and NR
//! (additive relevance plus non-redundancy against the history) are kept as
//! baselines.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{History, Topic};
use crate::error::{Error, Result};
use crate::preprocess::Sentence;
use crate::similarity::{cosine, jw_extended, lcs_norm, sim1_from_parts, TermVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scorer {
    #[default]
    Smmr,
    Mmr,
    Nr,
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scorer::Smmr => "smmr",
            Scorer::Mmr => "mmr",
            Scorer::Nr => "nr",
        })
    }
}

impl FromStr for Scorer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "smmr" => Ok(Scorer::Smmr),
            "mmr" => Ok(Scorer::Mmr),
            "nr" => Ok(Scorer::Nr),
            other => Err(Error::InvalidParameter(format!("unknown scorer `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingConfig {
    /// Weight of the cosine in `sim1`.
    pub alpha: f64,
    /// Relevance weight of the MMR and NR baselines.
    pub lambda: f64,
    /// Fixed novelty factor; `None` uses `1 / c`.
    pub nf_override: Option<f64>,
    /// Summary length limit in words.
    pub word_budget: usize,
    /// Maximum `lcs_norm` allowed between two summary sentences (exclusive).
    pub redundancy_threshold: f64,
    pub scorer: Scorer,
}

impl Default for RankingConfig {
    fn default() -> Self {
        Self {
            alpha: 0.7,
            lambda: 0.5,
            nf_override: None,
            word_budget: 100,
            redundancy_threshold: 0.8,
            scorer: Scorer::Smmr,
        }
    }
}

impl RankingConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        unit("alpha", self.alpha)?;
        unit("lambda", self.lambda)?;
        unit("redundancy_threshold", self.redundancy_threshold)?;
        if let Some(nf) = self.nf_override {
            if !(nf >= 0.0 && nf.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "novelty factor must be a finite value >= 0, got {nf}"
                )));
            }
        }
        if self.word_budget == 0 {
            return Err(Error::InvalidParameter("word budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub sentence: Sentence,
    pub sim1: f64,
    pub max_hist_sim2: f64,
    pub score: f64,
}

/// `1 / c`, unless the configuration fixes a value.
pub fn novelty_factor(history: &History, cfg: &RankingConfig) -> f64 {
    cfg.nf_override
        .unwrap_or_else(|| 1.0 / history.source_cluster_count.max(1) as f64)
}

/// Highest `lcs_norm` between `sentence` and any history sentence; 0 for an
/// empty history.
pub fn max_history_sim(sentence: &Sentence, history: &History) -> f64 {
    history
        .sentences
        .iter()
        .map(|h| lcs_norm(&sentence.tokens, &h.tokens))
        .fold(0.0, f64::max)
}

/// `sim1 * (1 - max_hist_sim2) ^ nf`, with `0 ^ 0 = 1`.
pub fn smmr_value(sim1: f64, max_hist_sim2: f64, nf: f64) -> f64 {
    let novelty = (1.0 - max_hist_sim2).clamp(0.0, 1.0);
    (sim1 * novelty.powf(nf)).clamp(0.0, 1.0)
}

pub fn mmr_value(sim1: f64, max_selected_sim2: f64, lambda: f64) -> f64 {
    lambda * sim1 - (1.0 - lambda) * max_selected_sim2
}

pub fn nr_value(sim1: f64, max_hist_sim2: f64, lambda: f64) -> f64 {
    lambda * sim1 + (1.0 - lambda) * (1.0 - max_hist_sim2)
}

fn query_relevance(sentence: &Sentence, query: &TermVector, topic: &Topic, alpha: f64) -> f64 {
    let cos = cosine(&TermVector::from_tokens(&sentence.tokens), query);
    sim1_from_parts(cos, jw_extended(&sentence.tokens, &topic.query_tokens), alpha)
}

pub fn smmr_score(
    sentence: &Sentence,
    topic: &Topic,
    history: &History,
    cfg: &RankingConfig,
) -> ScoredSentence {
    let query = TermVector::from_tokens(&topic.query_tokens);
    let sim1 = query_relevance(sentence, &query, topic, cfg.alpha);
    let max_hist_sim2 = max_history_sim(sentence, history);
    ScoredSentence {
        sentence: sentence.clone(),
        sim1,
        max_hist_sim2,
        score: smmr_value(sim1, max_hist_sim2, novelty_factor(history, cfg)),
    }
}

/// Descending score, then chronological reading order.
pub fn rank_order(a: &ScoredSentence, b: &ScoredSentence) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| reading_order(&a.sentence, &b.sentence))
}

fn reading_order(a: &Sentence, b: &Sentence) -> Ordering {
    a.reading_key()
        .cmp(&b.reading_key())
        .then_with(|| a.doc_id.cmp(&b.doc_id))
}

fn argmax_by_value(values: impl Iterator<Item = (usize, f64)>, sentences: &[&Sentence]) -> Option<usize> {
    values
        .max_by(|(i, x), (j, y)| {
            x.total_cmp(y)
                .then_with(|| reading_order(sentences[*j], sentences[*i]))
        })
        .map(|(i, _)| i)
}

/// One MMR step: index of the candidate maximizing
/// `lambda * sim1 - (1 - lambda) * max_{e in selected} sim2`.
pub fn mmr_rank(
    candidates: &[Sentence],
    topic: &Topic,
    selected: &[Sentence],
    cfg: &RankingConfig,
) -> Option<usize> {
    let query = TermVector::from_tokens(&topic.query_tokens);
    let refs: Vec<&Sentence> = candidates.iter().collect();
    argmax_by_value(
        candidates.iter().enumerate().map(|(i, s)| {
            let redundancy = selected
                .iter()
                .map(|e| lcs_norm(&s.tokens, &e.tokens))
                .fold(0.0, f64::max);
            (i, mmr_value(query_relevance(s, &query, topic, cfg.alpha), redundancy, cfg.lambda))
        }),
        &refs,
    )
}

/// Index of the candidate maximizing
/// `lambda * sim1 + (1 - lambda) * (1 - max_{h in H} sim2)`.
pub fn nr_rank(
    candidates: &[Sentence],
    topic: &Topic,
    history: &History,
    cfg: &RankingConfig,
) -> Option<usize> {
    let query = TermVector::from_tokens(&topic.query_tokens);
    let refs: Vec<&Sentence> = candidates.iter().collect();
    argmax_by_value(
        candidates.iter().enumerate().map(|(i, s)| {
            let sim1 = query_relevance(s, &query, topic, cfg.alpha);
            (i, nr_value(sim1, max_history_sim(s, history), cfg.lambda))
        }),
        &refs,
    )
}

/// Token ids shared by a batch of sentences, so that the many LCS
/// comparisons work on integers.
struct Interned {
    candidates: Vec<Vec<u32>>,
    history: Vec<Vec<u32>>,
}

impl Interned {
    fn new(candidates: &[Sentence], history: &History) -> Self {
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut intern = |tokens: &[String]| -> Vec<u32> {
            tokens
                .iter()
                .map(|t| {
                    let next = ids.len() as u32;
                    match ids.get(t.as_str()) {
                        Some(&id) => id,
                        None => {
                            ids.insert(t.clone(), next);
                            next
                        }
                    }
                })
                .collect()
        };
        let candidates = candidates.iter().map(|s| intern(&s.tokens)).collect();
        let history = history.sentences.iter().map(|s| intern(&s.tokens)).collect();
        Self { candidates, history }
    }

    fn max_history_sim(&self, candidate: usize) -> f64 {
        let tokens = &self.candidates[candidate];
        let mut best: f64 = 0.0;
        for h in &self.history {
            best = best.max(lcs_norm(tokens, h));
            if best >= 1.0 {
                break;
            }
        }
        best
    }
}

/// Scores every candidate sentence and returns them best first.
///
/// SMMR and NR produce a static ranking sorted by score. MMR is inherently
/// iterative: the list is in pick order and each score is the MMR value at
/// the time of the pick.
pub fn rank_cluster(
    candidates: &[Sentence],
    topic: &Topic,
    history: &History,
    cfg: &RankingConfig,
) -> Vec<ScoredSentence> {
    let query = TermVector::from_tokens(&topic.query_tokens);
    let relevance: Vec<f64> = candidates
        .iter()
        .map(|s| query_relevance(s, &query, topic, cfg.alpha))
        .collect();
    let interned = Interned::new(candidates, history);

    if cfg.scorer == Scorer::Mmr {
        return mmr_ranking(candidates, &relevance, &interned, cfg);
    }
    let nf = novelty_factor(history, cfg);
    let mut ranked: Vec<ScoredSentence> = candidates
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let max_hist_sim2 = interned.max_history_sim(i);
            let sim1 = relevance[i];
            let score = match cfg.scorer {
                Scorer::Nr => nr_value(sim1, max_hist_sim2, cfg.lambda),
                _ => smmr_value(sim1, max_hist_sim2, nf),
            };
            ScoredSentence {
                sentence: s.clone(),
                sim1,
                max_hist_sim2,
                score,
            }
        })
        .collect();
    ranked.sort_by(rank_order);
    ranked
}

fn mmr_ranking(
    candidates: &[Sentence],
    relevance: &[f64],
    interned: &Interned,
    cfg: &RankingConfig,
) -> Vec<ScoredSentence> {
    let refs: Vec<&Sentence> = candidates.iter().collect();
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let mut redundancy = vec![0.0f64; candidates.len()];
    let mut ranked = Vec::with_capacity(candidates.len());
    while !remaining.is_empty() {
        let values = remaining
            .iter()
            .enumerate()
            .map(|(slot, &i)| (slot, mmr_value(relevance[i], redundancy[i], cfg.lambda)));
        let picked_refs: Vec<&Sentence> = remaining.iter().map(|&i| refs[i]).collect();
        let Some(slot) = argmax_by_value(values, &picked_refs) else {
            break;
        };
        let picked = remaining.remove(slot);
        for &i in &remaining {
            let sim = lcs_norm(&interned.candidates[i], &interned.candidates[picked]);
            redundancy[i] = redundancy[i].max(sim);
        }
        ranked.push(ScoredSentence {
            sentence: candidates[picked].clone(),
            sim1: relevance[picked],
            max_hist_sim2: interned.max_history_sim(picked),
            score: mmr_value(relevance[picked], redundancy[picked], cfg.lambda),
        });
    }
    ranked
}

/// Greedy scan of a ranked list under the word budget.
///
/// A sentence is admitted when it is relevant (`sim1 > 0`; under SMMR the
/// score must also be positive, which excludes verbatim copies of the
/// history), its `lcs_norm` with every admitted sentence is below the
/// redundancy threshold, and its raw word count still fits. Sentences that
/// do not fit are skipped and the scan continues.
pub fn select_sentences(ranked: &[ScoredSentence], cfg: &RankingConfig) -> Vec<ScoredSentence> {
    let mut admitted: Vec<ScoredSentence> = Vec::new();
    let mut words = 0;
    for candidate in ranked {
        if words >= cfg.word_budget {
            break;
        }
        let relevant = candidate.sim1 > 0.0 && (cfg.scorer != Scorer::Smmr || candidate.score > 0.0);
        if !relevant || words + candidate.sentence.word_count > cfg.word_budget {
            continue;
        }
        let redundant = admitted.iter().any(|a| {
            lcs_norm(&a.sentence.tokens, &candidate.sentence.tokens) >= cfg.redundancy_threshold
        });
        if redundant {
            continue;
        }
        words += candidate.sentence.word_count;
        admitted.push(candidate.clone());
    }
    admitted
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    pub(crate) fn sentence(doc: usize, index: usize, text: &str, words: usize) -> Sentence {
        Sentence {
            doc_id: format!("doc{doc}"),
            doc_timestamp: NaiveDate::from_ymd_opt(2005, 1, 1 + doc as u32).unwrap(),
            doc_position: doc,
            index,
            raw: text.to_string(),
            tokens: text.split_whitespace().map(str::to_string).collect(),
            word_count: words,
        }
    }

    fn topic(q: &str) -> Topic {
        let mut t = Topic::new("T", "", q);
        t.query_tokens = q.split_whitespace().map(str::to_string).collect();
        t
    }

    fn scored(s: Sentence, score: f64) -> ScoredSentence {
        ScoredSentence {
            sentence: s,
            sim1: score,
            max_hist_sim2: 0.0,
            score,
        }
    }

    #[test]
    fn novelty_factor_examples() {
        let cfg = RankingConfig::default();
        let mut h = History::empty();
        assert_eq!(novelty_factor(&h, &cfg), 1.0);
        h.source_cluster_count = 2;
        assert_eq!(novelty_factor(&h, &cfg), 0.5);
        let cfg = RankingConfig {
            nf_override: Some(0.6),
            ..cfg
        };
        assert_eq!(novelty_factor(&h, &cfg), 0.6);
    }

    #[test]
    fn max_history_sim_examples() {
        let s = sentence(0, 0, "a b c d e f g h i j", 10);
        assert_eq!(max_history_sim(&s, &History::empty()), 0.0);
        let h = History {
            sentences: vec![s.clone()],
            source_cluster_count: 2,
        };
        assert_eq!(max_history_sim(&s, &h), 1.0);
        let h = History {
            sentences: vec![
                sentence(1, 0, "a b c p q r s t u v", 10), // 3/10
                sentence(1, 1, "a b c d e f g w y z", 10), // 7/10
            ],
            source_cluster_count: 2,
        };
        assert!((max_history_sim(&s, &h) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn smmr_examples() {
        assert_eq!(smmr_value(0.37, 0.0, 1.0), 0.37);
        assert_eq!(smmr_value(0.37, 1.0, 0.5), 0.0);
        assert_eq!(smmr_value(0.37, 1.0, 0.0), 0.37);
        assert!((smmr_value(0.6, 0.36, 0.5) - 0.48).abs() < 1e-12);

        let t = topic("ice melt");
        let s = sentence(0, 0, "ice melt arctic", 3);
        let r = smmr_score(&s, &t, &History::empty(), &RankingConfig::default());
        assert_eq!(r.score, r.sim1);
        assert_eq!(r.max_hist_sim2, 0.0);
    }

    #[test]
    fn mmr_and_nr_arithmetic() {
        // sim1 {0.8, 0.7}, redundancy {0.9, 0.0}, lambda 0.5 -> -0.05 vs 0.35
        assert!((mmr_value(0.8, 0.9, 0.5) + 0.05).abs() < 1e-12);
        assert!((mmr_value(0.7, 0.0, 0.5) - 0.35).abs() < 1e-12);
        // sim1 {0.4, 0.6}, history redundancy {0.0, 0.9} -> 0.7 vs 0.35
        assert!((nr_value(0.4, 0.0, 0.5) - 0.7).abs() < 1e-12);
        assert!((nr_value(0.6, 0.9, 0.5) - 0.35).abs() < 1e-12);
    }

    #[test]
    fn mmr_rank_penalizes_selected_overlap() {
        let t = topic("ice melt arctic");
        let first = sentence(0, 0, "ice melt arctic ocean", 4);
        let dup = sentence(0, 1, "ice melt arctic ocean", 4);
        let other = sentence(1, 0, "ice sheet", 2);
        let cfg = RankingConfig::default();
        assert_eq!(mmr_rank(&[first.clone(), other.clone()], &t, &[], &cfg), Some(0));
        assert_eq!(mmr_rank(&[dup, other], &t, &[first], &cfg), Some(1));
        let lambda_one = RankingConfig {
            lambda: 1.0,
            ..cfg
        };
        let a = sentence(0, 0, "ice melt", 2);
        let b = sentence(0, 1, "ocean", 1);
        assert_eq!(mmr_rank(&[b, a.clone()], &t, &[a], &lambda_one), Some(1));
    }

    #[test]
    fn nr_rank_prefers_novel_sentence() {
        let t = topic("ice melt arctic");
        let old = sentence(0, 0, "ice melt arctic ocean", 4);
        let new = sentence(1, 0, "ice melt shelf", 3);
        let h = History {
            sentences: vec![old.clone()],
            source_cluster_count: 2,
        };
        let cfg = RankingConfig::default();
        assert_eq!(nr_rank(&[old.clone(), new.clone()], &t, &h, &cfg), Some(1));
        assert_eq!(nr_rank(&[old, new], &t, &History::empty(), &cfg), Some(0));
    }

    #[test]
    fn rank_cluster_singleton_and_duplicate() {
        let t = topic("ice melt");
        let cfg = RankingConfig::default();
        let only = sentence(0, 0, "ice melt", 2);
        assert_eq!(rank_cluster(std::slice::from_ref(&only), &t, &History::empty(), &cfg).len(), 1);

        let a = sentence(0, 0, "ice melt x", 3);
        let b = sentence(1, 0, "ice melt y", 3);
        let h = History {
            sentences: vec![sentence(9, 0, "ice melt x", 3)],
            source_cluster_count: 2,
        };
        let ranked = rank_cluster(&[a, b], &t, &h, &cfg);
        assert_eq!(ranked[0].sentence.doc_id, "doc1");
        assert_eq!(ranked[1].score, 0.0);
    }

    #[test]
    fn rank_ties_follow_reading_order() {
        let t = topic("ice");
        let cfg = RankingConfig::default();
        let later = sentence(3, 0, "ice", 1);
        let earlier = sentence(1, 2, "ice", 1);
        let earliest_idx = sentence(1, 1, "ice", 1);
        let ranked = rank_cluster(&[later, earlier, earliest_idx], &t, &History::empty(), &cfg);
        let keys: Vec<_> = ranked.iter().map(|r| (r.sentence.doc_position, r.sentence.index)).collect();
        assert_eq!(keys, [(1, 1), (1, 2), (3, 0)]);
    }

    #[test]
    fn selection_blocks_duplicates() {
        let cfg = RankingConfig::default();
        let first = sentence(0, 0, "a b c d e", 40);
        let dup = sentence(0, 1, "a b c d e", 40);
        let third = sentence(1, 0, "x y z", 50);
        let picked = select_sentences(
            &[scored(first, 0.9), scored(dup, 0.8), scored(third, 0.7)],
            &cfg,
        );
        let ids: Vec<_> = picked.iter().map(|p| (p.sentence.doc_position, p.sentence.index)).collect();
        assert_eq!(ids, [(0, 0), (1, 0)]);
    }

    #[test]
    fn selection_with_everything_too_long_is_empty() {
        let cfg = RankingConfig::default();
        let long = sentence(0, 0, "a", 101);
        assert!(select_sentences(&[scored(long, 0.9)], &cfg).is_empty());
    }

    #[test]
    fn selection_skips_overflow_and_continues() {
        let cfg = RankingConfig::default();
        let picked = select_sentences(
            &[
                scored(sentence(0, 0, "a", 60), 0.9),
                scored(sentence(1, 0, "b", 45), 0.8),
                scored(sentence(2, 0, "c", 35), 0.7),
            ],
            &cfg,
        );
        let total: usize = picked.iter().map(|p| p.sentence.word_count).sum();
        assert_eq!(picked.len(), 2);
        assert_eq!(total, 95);
    }

    #[test]
    fn history_duplicates_are_never_selected() {
        let cfg = RankingConfig::default();
        let mut dup = scored(sentence(0, 0, "a", 5), 0.0);
        dup.sim1 = 0.9;
        dup.max_hist_sim2 = 1.0;
        assert!(select_sentences(&[dup], &cfg).is_empty());
    }

    #[test]
    fn config_validation() {
        assert!(RankingConfig::default().validate().is_ok());
        let bad = RankingConfig {
            alpha: 1.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = RankingConfig {
            nf_override: Some(-0.1),
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!("NR".parse::<Scorer>().unwrap(), Scorer::Nr);
    }
}
