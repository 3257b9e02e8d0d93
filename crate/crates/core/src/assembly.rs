//! Summary assembly: rule-based rewrites, chronological ordering and the
//! budget loop.
//!
//! Each selected sentence goes through the same per-sentence pipeline
//! (dates and numbers, fuzzy temporal references, leading discourse markers,
//! say clauses and parentheses). Acronym handling runs last over the ordered
//! list because the first occurrence is expanded and later ones are not.

use std::collections::{BTreeMap, HashSet};
use std::sync::LazyLock;

use chrono::{Datelike, Days, Months, NaiveDate};
use regex::{Captures, Regex};
use serde::{Deserialize, Serialize};

use crate::corpus::{Cluster, SetLabel};
use crate::error::{Error, Result};
use crate::preprocess::{month_number, Sentence};
use crate::ranking::ScoredSentence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalUnit {
    Day,
    Month,
    Year,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalRule {
    pub phrase: String,
    pub unit: TemporalUnit,
    pub offset: i32,
}

/// Fuzzy temporal phrases resolved against the document date.
#[derive(Clone, Debug)]
pub struct TemporalRules {
    rules: Vec<TemporalRule>,
    pattern: Option<Regex>,
}

/// Words after which a resolved date needs no extra preposition.
const PREPOSITIONS: &[&str] = &[
    "of", "in", "by", "since", "until", "from", "during", "before", "after", "through", "to",
    "for", "at", "on",
];

impl TemporalRules {
    /// Parses `phrase<TAB>unit<TAB>offset` lines. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let malformed = |line: usize, reason: String| Error::MalformedResource {
            path: origin.to_string(),
            line,
            reason,
        };
        let mut rules = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [phrase, unit, offset] = fields[..] else {
                return Err(malformed(n + 1, format!("expected 3 tab-separated fields, got {}", fields.len())));
            };
            let unit = match unit.trim().to_ascii_lowercase().as_str() {
                "day" => TemporalUnit::Day,
                "month" => TemporalUnit::Month,
                "year" => TemporalUnit::Year,
                other => return Err(malformed(n + 1, format!("unknown unit `{other}`"))),
            };
            let offset: i32 = offset
                .trim()
                .trim_start_matches('+')
                .parse()
                .map_err(|_| malformed(n + 1, format!("bad offset `{}`", offset.trim())))?;
            let phrase = phrase.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
            if phrase.is_empty() {
                return Err(malformed(n + 1, "empty phrase".into()));
            }
            rules.push(TemporalRule { phrase, unit, offset });
        }
        Ok(Self::from_rules(rules))
    }

    pub fn from_rules(mut rules: Vec<TemporalRule>) -> Self {
        rules.sort_by(|a, b| b.phrase.len().cmp(&a.phrase.len()).then_with(|| a.phrase.cmp(&b.phrase)));
        let pattern = (!rules.is_empty()).then(|| {
            let alternatives: Vec<String> = rules
                .iter()
                .map(|r| {
                    r.phrase
                        .split(' ')
                        .map(regex::escape)
                        .collect::<Vec<_>>()
                        .join(r"\s+")
                })
                .collect();
            Regex::new(&format!(r"(?i)\b(?:{})\b", alternatives.join("|"))).expect("escaped phrases")
        });
        Self { rules, pattern }
    }

    pub fn rules(&self) -> &[TemporalRule] {
        &self.rules
    }

    fn lookup(&self, matched: &str) -> Option<&TemporalRule> {
        let key = matched.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
        self.rules.iter().find(|r| r.phrase == key)
    }

    /// Replaces every known phrase by its absolute form.
    pub fn rewrite(&self, text: &str, doc_timestamp: NaiveDate) -> String {
        let Some(pattern) = &self.pattern else {
            return text.to_string();
        };
        let mut out = String::with_capacity(text.len());
        let mut last = 0;
        for m in pattern.find_iter(text) {
            let Some(rule) = self.lookup(m.as_str()) else {
                continue;
            };
            let Some(resolved) = resolve(rule, doc_timestamp) else {
                continue;
            };
            let before = &text[..m.start()];
            out.push_str(&text[last..m.start()]);
            let head = before.trim_end().trim_end_matches(['"', '\u{201c}', '\'']);
            let previous = head
                .split_whitespace()
                .last()
                .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase());
            match previous {
                None if head.trim().is_empty() => out.push_str("In "),
                Some(w) if PREPOSITIONS.contains(&w.as_str()) => {}
                _ => out.push_str("in "),
            }
            out.push_str(&resolved);
            last = m.end();
        }
        out.push_str(&text[last..]);
        out
    }
}

fn resolve(rule: &TemporalRule, date: NaiveDate) -> Option<String> {
    match rule.unit {
        TemporalUnit::Year => Some(format!("{:04}", date.year() + rule.offset)),
        TemporalUnit::Month => {
            let first = date.with_day(1)?;
            let shifted = if rule.offset >= 0 {
                first.checked_add_months(Months::new(rule.offset as u32))?
            } else {
                first.checked_sub_months(Months::new(rule.offset.unsigned_abs()))?
            };
            Some(shifted.format("%m/%Y").to_string())
        }
        TemporalUnit::Day => {
            let shifted = if rule.offset >= 0 {
                date.checked_add_days(Days::new(rule.offset as u64))?
            } else {
                date.checked_sub_days(Days::new(rule.offset.unsigned_abs() as u64))?
            };
            Some(shifted.format("%m/%d/%Y").to_string())
        }
    }
}

pub fn rewrite_temporal_refs(text: &str, doc_timestamp: NaiveDate, rules: &TemporalRules) -> String {
    rules.rewrite(text, doc_timestamp)
}

/// Sentence-initial discourse markers, removed when followed by a comma.
#[derive(Clone, Debug, Default)]
pub struct DiscursiveMarkers {
    markers: Vec<String>,
}

impl DiscursiveMarkers {
    pub fn parse(text: &str) -> Self {
        Self::from_phrases(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_phrases<I, S>(phrases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut markers: Vec<String> = phrases
            .into_iter()
            .map(|p| p.as_ref().split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase())
            .filter(|p| !p.is_empty())
            .collect();
        markers.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        markers.dedup();
        Self { markers }
    }

    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }

    pub fn strip(&self, text: &str) -> String {
        let mut rest = text.trim_start();
        let mut stripped = false;
        'outer: loop {
            for marker in &self.markers {
                let Some(head) = rest.get(..marker.len()) else {
                    continue;
                };
                if head.eq_ignore_ascii_case(marker) && rest[marker.len()..].starts_with(',') {
                    rest = rest[marker.len() + 1..].trim_start();
                    stripped = true;
                    continue 'outer;
                }
            }
            break;
        }
        if !stripped {
            return text.to_string();
        }
        let mut chars = rest.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => String::new(),
        }
    }
}

pub fn strip_discursive(text: &str, markers: &DiscursiveMarkers) -> String {
    markers.strip(text)
}

static MONTH_DATE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)\b(january|february|march|april|may|june|july|august|september|october|november|december|jan|feb|apr|jun|jul|aug|sept|sep|oct|nov|dec)(\.)?(?:\s+(\d{1,2})(?:st|nd|rd|th)?\b(?:,?\s+(\d{4})\b)?|\s+(?:of\s+)?(\d{4})\b)",
    )
    .unwrap()
});

static DIGITS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\d+").unwrap());

/// Spelled-out dates become `MM/DD/YYYY`, `MM/DD` or `MM/YYYY`; integers of
/// five or more digits get comma thousands separators.
pub fn rewrite_dates_numbers(text: &str) -> String {
    let dated = MONTH_DATE.replace_all(text, |c: &Captures| {
        let whole = c[0].to_string();
        let name = &c[1];
        let lower = name.to_lowercase();
        if (lower == "may" || lower == "march") && !name.starts_with(|ch: char| ch.is_uppercase()) {
            return whole;
        }
        let Some(month) = month_number(&lower) else {
            return whole;
        };
        if let Some(year) = c.get(5) {
            return format!("{month:02}/{}", year.as_str());
        }
        let day: u32 = c[3].parse().unwrap_or(0);
        match c.get(4) {
            Some(year) => {
                let y: i32 = year.as_str().parse().unwrap_or(0);
                if NaiveDate::from_ymd_opt(y, month, day).is_some() {
                    format!("{month:02}/{day:02}/{y:04}")
                } else {
                    whole
                }
            }
            None if (1..=31).contains(&day) => format!("{month:02}/{day:02}"),
            None => whole,
        }
    });
    group_digits(&dated)
}

fn group_digits(text: &str) -> String {
    let bytes = text.as_bytes();
    let blocks = |i: Option<usize>, away: Option<usize>| -> bool {
        let Some(i) = i else { return false };
        let c = bytes[i];
        if c.is_ascii_alphanumeric() || c == b'/' || c >= 0x80 {
            return true;
        }
        (c == b'.' || c == b',') && away.is_some_and(|j| bytes[j].is_ascii_digit())
    };
    let mut out = String::with_capacity(text.len() + 8);
    let mut last = 0;
    for m in DIGITS.find_iter(text) {
        let (s, e) = (m.start(), m.end());
        let before = s.checked_sub(1);
        let before_far = s.checked_sub(2);
        let after = (e < bytes.len()).then_some(e);
        let after_far = (e + 1 < bytes.len()).then_some(e + 1);
        if m.len() < 5 || blocks(before, before_far) || blocks(after, after_far) {
            continue;
        }
        out.push_str(&text[last..s]);
        let digits = m.as_str();
        for (i, ch) in digits.chars().enumerate() {
            if i > 0 && (digits.len() - i) % 3 == 0 {
                out.push(',');
            }
            out.push(ch);
        }
        last = e;
    }
    out.push_str(&text[last..]);
    out
}

const SUBJECT: &str = r"(?:[Hh]e|[Ss]he|[Tt]hey|[Ww]e|I|[Yy]ou|[Ii]t|(?:[Tt]he\s+)?[A-Z][\w.'-]*(?:\s+[A-Z][\w.'-]*){0,3})";
const WHEN: &str = r"(?:\s+(?:on\s+)?(?:Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday|today|yesterday))?";

static TRAILING_SAY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?:,\s*{SUBJECT}\s+(?:said|says){WHEN}|,\s*(?:said|says)\s+{SUBJECT}{WHEN})\s*([.!?])?\s*$"
    ))
    .unwrap()
});

static QUOTED_SAY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r#",(["”'])\s*(?:{SUBJECT}\s+(?:said|says)|(?:said|says)\s+{SUBJECT}){WHEN}\s*([.!?])?\s*$"#
    ))
    .unwrap()
});

static MULTI_SPACE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s{2,}").unwrap());
static SPACE_BEFORE_PUNCT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+([,.;:!?])").unwrap());
static DOUBLE_COMMA: LazyLock<Regex> = LazyLock::new(|| Regex::new(r",(?:\s*,)+").unwrap());
static COMMA_BEFORE_STOP: LazyLock<Regex> = LazyLock::new(|| Regex::new(r",\s*([.!?])").unwrap());

/// Removes trailing say clauses and balanced parenthesized spans, then
/// cleans up spacing and punctuation.
pub fn strip_say_clauses_and_parens(text: &str) -> String {
    let without_parens = remove_balanced_parens(text);
    let quoted = QUOTED_SAY.replace(&without_parens, |c: &Captures| {
        format!("{}{}", c.get(2).map_or(".", |m| m.as_str()), &c[1])
    });
    let said = TRAILING_SAY.replace(&quoted, |c: &Captures| {
        c.get(1).map_or(".", |m| m.as_str()).to_string()
    });
    let s = MULTI_SPACE.replace_all(&said, " ");
    let s = SPACE_BEFORE_PUNCT.replace_all(&s, "$1");
    let s = DOUBLE_COMMA.replace_all(&s, ",");
    let s = COMMA_BEFORE_STOP.replace_all(&s, "$1");
    s.trim().to_string()
}

fn remove_balanced_parens(text: &str) -> String {
    let mut spans = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '(' => open.push(i),
            ')' => {
                if let Some(start) = open.pop() {
                    if open.is_empty() {
                        spans.push((start, i + 1));
                    }
                }
            }
            _ => {}
        }
    }
    if spans.is_empty() {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (start, end) in spans {
        out.push_str(text[last..start].trim_end_matches([' ', '\t']));
        last = end;
    }
    out.push_str(&text[last..]);
    out
}

/// Candidate acronyms mapped to mined expansions and their frequencies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AcronymTable {
    entries: BTreeMap<String, BTreeMap<String, usize>>,
}

const MINOR_WORDS: &[&str] = &["of", "the", "and", "for", "in", "on", "to", "&", "a"];

static PAREN_ACRONYM: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\(([A-Z]{2,10})\)").unwrap());
static ACRONYM_PAREN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b([A-Z]{2,10})\s+\(([^()]{3,160})\)").unwrap());
static ACRONYM_WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b[A-Z]{2,10}\b").unwrap());
static DOTTED_ACRONYM: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b(?:[A-Z]\.){2,}").unwrap());

impl AcronymTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, acronym: &str, expansion: &str) {
        *self
            .entries
            .entry(acronym.to_string())
            .or_default()
            .entry(expansion.to_string())
            .or_insert(0) += 1;
    }

    /// Harvests `Expansion Words (ACRO)` and `ACRO (Expansion Words)`.
    pub fn mine<'a, I>(texts: I) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut table = Self::new();
        for text in texts {
            for c in PAREN_ACRONYM.captures_iter(text) {
                let acronym = &c[1];
                let before = &text[..c.get(0).unwrap().start()];
                if let Some(expansion) = expansion_before(before, acronym) {
                    table.add(acronym, &expansion);
                }
            }
            for c in ACRONYM_PAREN.captures_iter(text) {
                let words: Vec<&str> = c[2].split_whitespace().collect();
                if initials_match(&words, &letters(&c[1])) {
                    table.add(&c[1], &words.join(" "));
                }
            }
        }
        table
    }

    /// Most frequent expansion; ties go to the lexicographically smallest.
    pub fn expansion(&self, acronym: &str) -> Option<&str> {
        self.entries.get(acronym).and_then(|e| {
            e.iter()
                .max_by(|(a, x), (b, y)| x.cmp(y).then_with(|| b.cmp(a)))
                .map(|(exp, _)| exp.as_str())
        })
    }

    pub fn candidates(&self, acronym: &str) -> impl Iterator<Item = (&str, usize)> {
        self.entries
            .get(acronym)
            .into_iter()
            .flat_map(|e| e.iter().map(|(k, v)| (k.as_str(), *v)))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn mine_acronyms(clusters: &[Cluster]) -> AcronymTable {
    AcronymTable::mine(
        clusters
            .iter()
            .flat_map(|c| c.documents.iter().map(|d| d.body.as_str())),
    )
}

fn letters(acronym: &str) -> Vec<char> {
    acronym.chars().collect()
}

fn expansion_before(before: &str, acronym: &str) -> Option<String> {
    let letters = letters(acronym);
    let mut words: Vec<&str> = Vec::new();
    for w in before.split_whitespace().rev().take(letters.len() * 2 + 2) {
        if w.ends_with([',', '.', ';', ':', ')', '"']) && !words.is_empty() {
            break;
        }
        words.push(w.trim_end_matches([',', ';', ':']));
    }
    words.reverse();
    (0..words.len())
        .rev()
        .find(|&i| initials_match(&words[i..], &letters))
        .map(|i| words[i..].join(" "))
}

fn initials_match(words: &[&str], letters: &[char]) -> bool {
    fn initial(w: &str) -> Option<char> {
        w.chars().next().filter(|c| c.is_uppercase())
    }
    fn go(words: &[&str], letters: &[char], k: usize, li: usize) -> bool {
        if k == words.len() {
            return li == letters.len();
        }
        let w = words[k];
        let minor = MINOR_WORDS.contains(&w.to_lowercase().as_str());
        let head = if minor {
            w.chars().next().map(|c| c.to_ascii_uppercase())
        } else {
            initial(w)
        };
        if li < letters.len() && head == Some(letters[li]) && go(words, letters, k + 1, li + 1) {
            return true;
        }
        let parts: Vec<&str> = w.split('-').filter(|p| !p.is_empty()).collect();
        if parts.len() > 1
            && li + parts.len() <= letters.len()
            && parts.iter().zip(&letters[li..]).all(|(p, l)| initial(p) == Some(*l))
            && go(words, letters, k + 1, li + parts.len())
        {
            return true;
        }
        let interior = k > 0 && k + 1 < words.len();
        interior && minor && go(words, letters, k + 1, li)
    }
    !words.is_empty() && words.len() <= letters.len() * 2 + 2 && go(words, letters, 0, 0)
}

/// Collapses dotted acronyms (`U.S.` to `US`, keeping a sentence-final
/// period) and expands the first occurrence of every known acronym.
pub fn rewrite_acronyms(sentences: &[String], table: &AcronymTable) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::new();
    sentences
        .iter()
        .map(|s| {
            let collapsed = DOTTED_ACRONYM.replace_all(s, |c: &Captures| {
                let m = c.get(0).unwrap();
                let letters: String = m.as_str().chars().filter(|ch| *ch != '.').collect();
                let at_end = s[m.end()..]
                    .trim_matches(|ch: char| ch.is_whitespace() || matches!(ch, '"' | '\u{201d}' | '\'' | ')'))
                    .is_empty();
                if at_end {
                    format!("{letters}.")
                } else {
                    letters
                }
            });
            ACRONYM_WORD
                .replace_all(&collapsed, |c: &Captures| {
                    let acronym = &c[0];
                    match table.expansion(acronym) {
                        Some(exp) if seen.insert(acronym.to_string()) => format!("{exp} ({acronym})"),
                        _ => acronym.to_string(),
                    }
                })
                .into_owned()
        })
        .collect()
}

/// Chronological order: document date, position in cluster, sentence index.
pub fn order_sentences(selected: &[Sentence]) -> Vec<Sentence> {
    let mut ordered = selected.to_vec();
    ordered.sort_by_key(|s| s.reading_key());
    ordered
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummarySentence {
    pub text: String,
    pub doc_id: String,
    pub doc_timestamp: NaiveDate,
    pub sentence_index: usize,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub topic_id: String,
    pub set: SetLabel,
    pub sentences: Vec<SummarySentence>,
    pub final_text: String,
    pub word_count: usize,
}

pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

#[derive(Clone, Copy, Debug)]
pub struct PostProcessor<'a> {
    pub temporal: &'a TemporalRules,
    pub markers: &'a DiscursiveMarkers,
    pub acronyms: &'a AcronymTable,
    pub budget: usize,
}

impl<'a> PostProcessor<'a> {
    pub fn new(
        temporal: &'a TemporalRules,
        markers: &'a DiscursiveMarkers,
        acronyms: &'a AcronymTable,
        budget: usize,
    ) -> Self {
        Self {
            temporal,
            markers,
            acronyms,
            budget,
        }
    }

    /// Per-sentence rewrites; acronyms are handled over the whole list.
    pub fn rewrite_sentence(&self, sentence: &Sentence) -> String {
        let text = rewrite_dates_numbers(&sentence.raw);
        let text = self.temporal.rewrite(&text, sentence.doc_timestamp);
        let text = self.markers.strip(&text);
        strip_say_clauses_and_parens(&text)
    }

    /// Orders, rewrites and recounts; while over budget, drops the lowest
    /// scored sentence and starts over.
    pub fn assemble(&self, topic_id: &str, set: SetLabel, selected: &[ScoredSentence]) -> Result<Summary> {
        let mut kept: Vec<ScoredSentence> = selected.to_vec();
        kept.sort_by_key(|a| a.sentence.reading_key());
        loop {
            if kept.is_empty() {
                return Err(Error::EmptySummary);
            }
            let rewritten: Vec<String> = kept.iter().map(|s| self.rewrite_sentence(&s.sentence)).collect();
            let rewritten = rewrite_acronyms(&rewritten, self.acronyms);
            let sentences: Vec<SummarySentence> = kept
                .iter()
                .zip(rewritten)
                .filter(|(_, text)| !text.is_empty())
                .map(|(s, text)| SummarySentence {
                    text,
                    doc_id: s.sentence.doc_id.clone(),
                    doc_timestamp: s.sentence.doc_timestamp,
                    sentence_index: s.sentence.index,
                    score: s.score,
                })
                .collect();
            let final_text = sentences.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(" ");
            let words = word_count(&final_text);
            if words <= self.budget && !sentences.is_empty() {
                return Ok(Summary {
                    topic_id: topic_id.to_string(),
                    set,
                    sentences,
                    final_text,
                    word_count: words,
                });
            }
            if sentences.is_empty() {
                return Err(Error::EmptySummary);
            }
            // lowest score goes; among equals, the latest in reading order
            let drop = kept
                .iter()
                .enumerate()
                .min_by(|(i, a), (j, b)| a.score.total_cmp(&b.score).then_with(|| j.cmp(i)))
                .map(|(i, _)| i)
                .expect("non-empty");
            log::debug!(
                "{topic_id}.{set}: {words} words over budget {}, dropping {}#{}",
                self.budget,
                kept[drop].sentence.doc_id,
                kept[drop].sentence.index
            );
            kept.remove(drop);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn rules() -> TemporalRules {
        Resources::builtin().temporal
    }

    fn markers() -> DiscursiveMarkers {
        Resources::builtin().markers
    }

    fn sentence(doc: &str, ts: NaiveDate, pos: usize, index: usize, raw: &str) -> Sentence {
        Sentence {
            doc_id: doc.to_string(),
            doc_timestamp: ts,
            doc_position: pos,
            index,
            raw: raw.to_string(),
            tokens: raw.split_whitespace().map(|w| w.to_lowercase()).collect(),
            word_count: word_count(raw),
        }
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
    fn temporal_examples() {
        let r = rules();
        assert_eq!(r.rewrite("the end of next year", date(1992, 6, 2)), "the end of 1993");
        assert_eq!(r.rewrite("last month", date(2005, 9, 30)), "In 08/2005");
        assert_eq!(
            r.rewrite("Last month, U.S. scientists", date(2005, 9, 30)),
            "In 08/2005, U.S. scientists"
        );
        assert_eq!(r.rewrite("They met last year.", date(2005, 1, 3)), "They met in 2004.");
        assert_eq!(r.rewrite("See you tomorrow.", date(2005, 1, 3)), "See you tomorrow.");
        assert_eq!(r.rewrite("next month", date(2005, 12, 31)), "In 01/2006");
    }

    #[test]
    fn temporal_rules_reject_bad_lines() {
        assert!(TemporalRules::parse("last week\tweek\t-1\n", "t").is_err());
        assert!(TemporalRules::parse("last week\tday\n", "t").is_err());
        let custom = TemporalRules::parse("# c\nlast week\tday\t-7\n", "t").unwrap();
        assert_eq!(custom.rewrite("It rained last week.", date(2005, 3, 3)), "It rained in 02/24/2005.");
    }

    #[test]
    fn discursive_examples() {
        let m = markers();
        assert_eq!(m.strip("But, it is fine."), "It is fine.");
        assert_eq!(
            m.strip("For example, the white sea ice reflects light."),
            "The white sea ice reflects light."
        );
        assert_eq!(m.strip("Butter is good."), "Butter is good.");
        assert_eq!(m.strip("But it is fine."), "But it is fine.");
    }

    #[test]
    fn date_and_number_examples() {
        assert_eq!(rewrite_dates_numbers("december 15, 1982"), "12/15/1982");
        assert_eq!(rewrite_dates_numbers("on Dec. 15 they met"), "on 12/15 they met");
        assert_eq!(rewrite_dates_numbers("In September 2005 it"), "In 09/2005 it");
        assert_eq!(rewrite_dates_numbers("1000000"), "1,000,000");
        assert_eq!(rewrite_dates_numbers("in 1998 and 12345."), "in 1998 and 12,345.");
        assert_eq!(rewrite_dates_numbers("pi is 3.14159"), "pi is 3.14159");
        assert_eq!(rewrite_dates_numbers("you may 15 times"), "you may 15 times");
        assert_eq!(rewrite_dates_numbers("February 30, 2001"), "February 30, 2001");
    }

    #[test]
    fn say_clause_and_paren_examples() {
        assert_eq!(strip_say_clauses_and_parens("Prices rose, he said."), "Prices rose.");
        assert_eq!(
            strip_say_clauses_and_parens("Prices rose, Alan Greenspan said Monday."),
            "Prices rose."
        );
        assert_eq!(strip_say_clauses_and_parens("\"Prices rose,\" she said."), "\"Prices rose.\"");
        assert_eq!(strip_say_clauses_and_parens("The plan (announced Monday) failed."), "The plan failed.");
        assert_eq!(strip_say_clauses_and_parens("A (b"), "A (b");
        assert_eq!(
            strip_say_clauses_and_parens("A panel of researchers says it sees no process."),
            "A panel of researchers says it sees no process."
        );
    }

    #[test]
    fn acronym_mining() {
        let t = AcronymTable::mine(["The World Health Organization (WHO) warned."]);
        assert_eq!(t.expansion("WHO"), Some("World Health Organization"));
        let t = AcronymTable::mine(["Help from the Department of Defense (DOD) came."]);
        assert_eq!(t.expansion("DOD"), Some("Department of Defense"));
        let t = AcronymTable::mine(["The IAEA (International Atomic Energy Agency) said."]);
        assert_eq!(t.expansion("IAEA"), Some("International Atomic Energy Agency"));
        let t = AcronymTable::mine(["Things like ducks (and so on) were seen.", "ASO (and so on) x"]);
        assert!(t.is_empty());
        let t = AcronymTable::mine([
            "Alpha Beta Corp (ABC) a",
            "Alpha Beta Corp (ABC) b",
            "Alpha Beta Corp (ABC) c",
            "American Broadcasting Company (ABC) d",
        ]);
        assert_eq!(t.expansion("ABC"), Some("Alpha Beta Corp"));
        assert!(AcronymTable::mine(["nothing here"]).is_empty());
    }

    #[test]
    fn parenthetical_without_initials_is_ignored() {
        let t = AcronymTable::mine(["Fruit (and so on) and more."]);
        assert!(t.is_empty());
    }

    #[test]
    fn acronym_rewriting() {
        let mut t = AcronymTable::new();
        t.add("WHO", "World Health Organization");
        let out = rewrite_acronyms(&["WHO said it.".into(), "WHO added more.".into()], &t);
        assert_eq!(out, ["World Health Organization (WHO) said it.", "WHO added more."]);
        let out = rewrite_acronyms(&["XQZV stays.".into()], &t);
        assert_eq!(out, ["XQZV stays."]);
        let out = rewrite_acronyms(&["U.S. scientists met in the U.S.".into()], &t);
        assert_eq!(out, ["US scientists met in the US."]);
    }

    #[test]
    fn ordering_examples() {
        let a = sentence("a", date(2005, 10, 25), 1, 0, "x");
        let b = sentence("b", date(2005, 10, 23), 0, 0, "y");
        let ordered = order_sentences(&[a, b]);
        assert_eq!(ordered[0].doc_id, "b");
        let five = sentence("a", date(2005, 10, 25), 0, 5, "x");
        let two = sentence("a", date(2005, 10, 25), 0, 2, "y");
        assert_eq!(order_sentences(&[five, two])[0].index, 2);
    }

    #[test]
    fn single_short_sentence_is_unchanged() {
        let (t, m, a) = (rules(), markers(), AcronymTable::new());
        let pp = PostProcessor::new(&t, &m, &a, 100);
        let s = sentence("d", date(2005, 1, 1), 0, 0, "Ice melts fast.");
        let summary = pp.assemble("T", SetLabel::A, &[scored(s, 0.5)]).unwrap();
        assert_eq!(summary.final_text, "Ice melts fast.");
        assert_eq!(summary.word_count, 3);
    }

    #[test]
    fn acronym_expansion_over_budget_drops_lowest() {
        // 4 + 5 = 9 raw words; expanding WHO adds 3 words, so 12 > 10 and
        // the weaker sentence goes. The survivor then expands to 7 words.
        let (t, m) = (rules(), markers());
        let mut a = AcronymTable::new();
        a.add("WHO", "World Health Organization");
        let pp = PostProcessor::new(&t, &m, &a, 10);
        let first = sentence("d1", date(2005, 1, 1), 0, 0, "WHO warned of flu.");
        let second = sentence("d2", date(2005, 1, 2), 1, 0, "Hospitals filled up very quickly.");
        let summary = pp
            .assemble("T", SetLabel::A, &[scored(first, 0.9), scored(second, 0.4)])
            .unwrap();
        assert_eq!(summary.final_text, "World Health Organization (WHO) warned of flu.");
        assert_eq!(summary.word_count, 7);
    }

    #[test]
    fn everything_dropped_is_an_error() {
        let (t, m, a) = (rules(), markers(), AcronymTable::new());
        let pp = PostProcessor::new(&t, &m, &a, 2);
        let s = sentence("d", date(2005, 1, 1), 0, 0, "Far too many words here.");
        assert!(matches!(pp.assemble("T", SetLabel::A, &[scored(s, 0.5)]), Err(Error::EmptySummary)));
        assert!(matches!(pp.assemble("T", SetLabel::A, &[]), Err(Error::EmptySummary)));
    }

    proptest! {
        #[test]
        fn assembled_summary_fits_budget(
            words in proptest::collection::vec(1usize..30, 1..8),
            budget in 5usize..60,
        ) {
            let (t, m) = (rules(), markers());
            let mut a = AcronymTable::new();
            a.add("WHO", "World Health Organization");
            let pp = PostProcessor::new(&t, &m, &a, budget);
            let selected: Vec<ScoredSentence> = words
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let raw = format!("WHO {}.", vec!["word"; *n].join(" "));
                    scored(sentence("d", date(2005, 1, 1), 0, i, &raw), 1.0 / (i + 1) as f64)
                })
                .collect();
            match pp.assemble("T", SetLabel::B, &selected) {
                Ok(s) => {
                    prop_assert!(s.word_count <= budget);
                    prop_assert_eq!(s.word_count, word_count(&s.final_text));
                }
                Err(Error::EmptySummary) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn rewrites_stay_in_source_alphabet(text in "[A-Za-z0-9 ,.()]{0,80}") {
            let out = strip_say_clauses_and_parens(&rewrite_dates_numbers(&text));
            let allowed: HashSet<char> = text.chars().chain("0123456789/(),.".chars()).collect();
            prop_assert!(out.chars().all(|c| allowed.contains(&c)), "{out:?}");
        }
    }
}
