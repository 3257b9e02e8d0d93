//! Similarity kernels.
//!
//! Query relevance (`sim1`) blends a raw term-frequency cosine with an
//! extended Jaro-Winkler score that lets morphologically close words match.
//! Redundancy between two sentences (`lcs_norm`) is the longest common
//! contiguous token run, normalized by the shorter sentence.
//!
//! All kernels return values in `[0, 1]`.

use std::collections::BTreeMap;

/// Sparse raw term frequencies. No idf weighting is applied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermVector {
    counts: BTreeMap<String, u32>,
}

impl TermVector {
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Self {
        let mut counts = BTreeMap::new();
        for t in tokens {
            *counts.entry(t.as_ref().to_string()).or_insert(0) += 1;
        }
        Self { counts }
    }

    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        Self {
            counts: counts
                .into_iter()
                .filter(|(_, c)| *c > 0)
                .map(|(t, c)| (t.into(), c))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, term: &str) -> u32 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    fn squared_norm(&self) -> f64 {
        self.counts.values().map(|&c| f64::from(c) * f64::from(c)).sum()
    }
}

/// Cosine of two raw term-frequency vectors; 0 when either is empty.
pub fn cosine(a: &TermVector, b: &TermVector) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (small, large) = if a.counts.len() <= b.counts.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .counts
        .iter()
        .map(|(t, &c)| f64::from(c) * f64::from(large.get(t)))
        .sum();
    if dot == 0.0 {
        return 0.0;
    }
    (dot / (a.squared_norm() * b.squared_norm()).sqrt()).clamp(0.0, 1.0)
}

/// Jaro similarity.
///
/// Characters match when equal and no further apart than
/// `max(|a|, |b|) / 2 - 1`; the transposition count is half the number of
/// matched characters that appear in a different order.
pub fn jaro(a: &str, b: &str) -> f64 {
    if a.is_ascii() && b.is_ascii() {
        jaro_slices(a.as_bytes(), b.as_bytes())
    } else {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        jaro_slices(&a, &b)
    }
}

fn jaro_slices<T: Eq>(a: &[T], b: &[T]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_used = vec![false; b.len()];
    let mut a_matched = Vec::with_capacity(a.len());
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == *ca {
                b_used[j] = true;
                a_matched.push(ca);
                break;
            }
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let out_of_order = b
        .iter()
        .zip(&b_used)
        .filter(|(_, used)| **used)
        .zip(&a_matched)
        .filter(|((cb, _), ca)| *cb != **ca)
        .count();
    let m = m as f64;
    let t = out_of_order as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

pub const WINKLER_SCALING: f64 = 0.1;
pub const WINKLER_MAX_PREFIX: usize = 4;

/// Jaro similarity boosted by the common prefix (capped at 4 characters,
/// scaling 0.1).
pub fn jaro_winkler(a: &str, b: &str) -> f64 {
    let j = jaro(a, b);
    let prefix = a
        .chars()
        .zip(b.chars())
        .take(WINKLER_MAX_PREFIX)
        .take_while(|(x, y)| x == y)
        .count();
    (j + prefix as f64 * WINKLER_SCALING * (1.0 - j)).min(1.0)
}

/// Extended Jaro-Winkler between a sentence and a query.
///
/// Each query term, in query order, takes its best Jaro-Winkler match among
/// the distinct sentence terms that are still available; the matched term is
/// then consumed. Query terms left once every sentence term is consumed
/// contribute 0. The sum is averaged over the query length.
pub fn jw_extended<S: AsRef<str>, Q: AsRef<str>>(sentence: &[S], query: &[Q]) -> f64 {
    if sentence.is_empty() || query.is_empty() {
        return 0.0;
    }
    let mut terms: Vec<&str> = Vec::with_capacity(sentence.len());
    for t in sentence {
        if !terms.contains(&t.as_ref()) {
            terms.push(t.as_ref());
        }
    }
    let scores: Vec<Vec<f64>> = query
        .iter()
        .map(|q| terms.iter().map(|m| jaro_winkler(q.as_ref(), m)).collect())
        .collect();
    let mut available = vec![true; terms.len()];
    let mut remaining = terms.len();
    let mut total = 0.0;
    for row in &scores {
        if remaining == 0 {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (j, &score) in row.iter().enumerate() {
            if available[j] && best.map_or(true, |(_, b)| score > b) {
                best = Some((j, score));
            }
        }
        if let Some((j, score)) = best {
            available[j] = false;
            remaining -= 1;
            total += score;
        }
    }
    (total / query.len() as f64).clamp(0.0, 1.0)
}

/// `alpha * cosine + (1 - alpha) * jw_extended`.
pub fn sim1_from_parts(cosine: f64, jw_extended: f64, alpha: f64) -> f64 {
    (alpha * cosine + (1.0 - alpha) * jw_extended).clamp(0.0, 1.0)
}

/// Query relevance of a sentence.
pub fn sim1<S: AsRef<str>, Q: AsRef<str>>(sentence: &[S], query: &[Q], alpha: f64) -> f64 {
    let cos = cosine(&TermVector::from_tokens(sentence), &TermVector::from_tokens(query));
    sim1_from_parts(cos, jw_extended(sentence, query), alpha)
}

/// Length of the longest contiguous run shared by `a` and `b`.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; b.len() + 1];
    let mut best = 0;
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if x == y { diag + 1 } else { 0 };
            best = best.max(row[j + 1]);
            diag = above;
        }
    }
    best
}

/// Longest common substring (in tokens) over the shorter length; 0 when
/// either side is empty.
pub fn lcs_norm<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let shorter = a.len().min(b.len());
    if shorter == 0 {
        return 0.0;
    }
    lcs_len(a, b) as f64 / shorter as f64
}
