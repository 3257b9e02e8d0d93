//! Document pre-processing: sentence splitting, token filtering, date
//! normalization and word normalization.
//!
//! Each sentence keeps two representations: the raw surface text used to
//! build the final summary, and the processed token list used for scoring.

use std::collections::{HashMap, HashSet};
use std::sync::LazyLock;

use chrono::NaiveDate;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::{Cluster, Document, Topic};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub doc_timestamp: NaiveDate,
    /// Position of the source document inside its (sorted) cluster.
    pub doc_position: usize,
    /// Ordinal of the sentence within its document.
    pub index: usize,
    pub raw: String,
    pub tokens: Vec<String>,
    /// Whitespace-delimited words in `raw`.
    pub word_count: usize,
}

impl Sentence {
    /// Chronological reading order: document date, document position,
    /// sentence index.
    pub fn reading_key(&self) -> (NaiveDate, usize, usize) {
        (self.doc_timestamp, self.doc_position, self.index)
    }
}

/// A cluster together with its processed sentences.
#[derive(Clone, Debug)]
pub struct ProcessedCluster {
    pub cluster: Cluster,
    pub sentences: Vec<Sentence>,
}

#[derive(Clone, Debug, Default)]
pub struct Stoplist {
    words: HashSet<String>,
}

impl Stoplist {
    /// One word per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        Self { words }
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    /// Expects a lowercase word.
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Inflected form to root form mapping.
///
/// Roots are resolved transitively when the table is built, so
/// [`Lexicon::normalize`] is idempotent.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    roots: HashMap<String, String>,
}

impl Lexicon {
    /// Parses `inflected<TAB>root<TAB>frequency` lines. When a form has
    /// several roots, the one with the highest frequency wins.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut best: HashMap<String, (String, u64)> = HashMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |reason: &str| Error::MalformedResource {
                path: origin.to_string(),
                line: n + 1,
                reason: reason.to_string(),
            };
            let mut fields = line.split('\t');
            let (Some(form), Some(root), Some(freq)) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(malformed("expected three tab-separated fields"));
            };
            let freq: u64 = freq
                .trim()
                .parse()
                .map_err(|_| malformed("frequency is not an integer"))?;
            let form = form.trim().to_lowercase();
            let root = root.trim().to_lowercase();
            if form.is_empty() || root.is_empty() {
                return Err(malformed("empty form or root"));
            }
            let replace = match best.get(&form) {
                None => true,
                Some((r, f)) => freq > *f || (freq == *f && root < *r),
            };
            if replace {
                best.insert(form, (root, freq));
            }
        }
        let direct: HashMap<String, String> = best.into_iter().map(|(k, (r, _))| (k, r)).collect();
        Ok(Self {
            roots: resolve_chains(&direct),
        })
    }

    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let direct = pairs
            .into_iter()
            .map(|(a, b)| (a.as_ref().to_lowercase(), b.as_ref().to_lowercase()))
            .collect();
        Self {
            roots: resolve_chains(&direct),
        }
    }

    pub fn normalize<'a>(&'a self, token: &'a str) -> &'a str {
        self.roots.get(token).map_or(token, String::as_str)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn resolve_chains(direct: &HashMap<String, String>) -> HashMap<String, String> {
    let mut resolved = HashMap::with_capacity(direct.len());
    for start in direct.keys() {
        let mut path: Vec<&str> = vec![start];
        let mut current: &str = start;
        let root = loop {
            match direct.get(current) {
                Some(next) if next != current => {
                    if let Some(pos) = path.iter().position(|p| *p == next) {
                        // cycle: collapse onto its smallest member
                        break path[pos..].iter().min().copied().unwrap_or(current);
                    }
                    path.push(next);
                    current = next;
                }
                _ => break current,
            }
        };
        resolved.insert(start.clone(), root.to_string());
    }
    resolved
}

const GUARD: char = '\u{E000}';

const TITLES: &[&str] = &[
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Sen", "Rep", "Gov", "Gen", "Col", "Lt", "Sgt", "Capt",
    "Rev", "Hon", "St", "Mt", "Ft", "Adm", "Cmdr", "Maj", "Pres",
];
const MONTH_ABBREVIATIONS: &[&str] = &[
    "Jan", "Feb", "Mar", "Apr", "Jun", "Jul", "Aug", "Sep", "Sept", "Oct", "Nov", "Dec",
];

/// Marks dots that must not end a sentence: middle initials between
/// capitalized words (`George W. Bush`), the inner dots of dotted
/// abbreviations (`U.S.`), and a few titles (`Mr. Smith`, `Jan. 5`).
///
/// Marked dots are replaced by a private-use character; [`split_sentences`]
/// restores them.
pub fn guard_person_names(body: &str) -> String {
    let mut out: Vec<char> = body.chars().collect();
    let words = word_spans(&out);
    let is_capitalized = |w: &[char]| {
        w.first().is_some_and(|c| c.is_uppercase())
            && (w.len() == 1 || w[1..].iter().any(|c| c.is_lowercase()) || is_initial(w))
    };
    for (i, &(start, end)) in words.iter().enumerate() {
        let word = &out[start..end];
        // inner dots of dotted abbreviations
        if is_dotted_abbreviation(word) {
            for c in &mut out[start..end - 1] {
                if *c == '.' {
                    *c = GUARD;
                }
            }
        }
        let word = &out[start..end];
        let prev = i.checked_sub(1).map(|j| &out[words[j].0..words[j].1]);
        let next = words.get(i + 1).map(|&(s, e)| &out[s..e]);
        if is_initial(word) {
            let between_names = prev.is_some_and(|p| is_capitalized(p) && !ends_sentence(p))
                && next.is_some_and(is_capitalized);
            if between_names {
                out[end - 1] = GUARD;
            }
            continue;
        }
        if word.last() == Some(&'.') {
            let stem: String = word[..word.len() - 1].iter().collect();
            let next_first = next.and_then(|n| n.first().copied());
            let guarded = (TITLES.contains(&stem.as_str())
                && next_first.is_some_and(char::is_uppercase))
                || (MONTH_ABBREVIATIONS.contains(&stem.as_str())
                    && next_first.is_some_and(|c| c.is_ascii_digit()));
            if guarded {
                out[end - 1] = GUARD;
            }
        }
    }
    out.into_iter().collect()
}

fn word_spans(chars: &[char]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in chars.iter().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, chars.len()));
    }
    spans
}

fn is_initial(word: &[char]) -> bool {
    word.len() == 2 && word[0].is_uppercase() && (word[1] == '.' || word[1] == GUARD)
}

fn ends_sentence(word: &[char]) -> bool {
    matches!(word.last(), Some('.' | '!' | '?')) && !is_initial(word)
}

/// `U.S.`, `e.g.`, `U.S.A.`: at least two letter-dot pairs.
fn is_dotted_abbreviation(word: &[char]) -> bool {
    word.len() >= 4
        && word.len() % 2 == 0
        && word
            .chunks(2)
            .all(|pair| pair[0].is_alphabetic() && (pair[1] == '.' || pair[1] == GUARD))
}

/// Splits a document body into trimmed sentences.
///
/// A sentence ends at `.`, `!` or `?` (plus any closing quotes or brackets)
/// followed by whitespace, unless the next word starts with a lowercase
/// letter. Blank lines always end a sentence.
pub fn split_sentences(body: &str) -> Vec<String> {
    let guarded: Vec<char> = guard_person_names(body).chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;
    let n = guarded.len();
    let push = |from: usize, to: usize, out: &mut Vec<String>| {
        let s: String = guarded[from..to]
            .iter()
            .map(|&c| if c == GUARD { '.' } else { c })
            .collect();
        let s = s.trim();
        if !s.is_empty() {
            out.push(s.to_string());
        }
    };
    while i < n {
        let c = guarded[i];
        if c == '\n' {
            let mut j = i + 1;
            while j < n && guarded[j] != '\n' && guarded[j].is_whitespace() {
                j += 1;
            }
            if j < n && guarded[j] == '\n' {
                push(start, i, &mut sentences);
                start = j + 1;
                i = j + 1;
                continue;
            }
        }
        if matches!(c, '.' | '!' | '?') {
            let mut end = i + 1;
            while end < n && matches!(guarded[end], '.' | '!' | '?' | '"' | '\'' | '”' | '’' | ')') {
                end += 1;
            }
            let at_boundary = end == n || guarded[end].is_whitespace();
            if at_boundary {
                let next_word = guarded[end..].iter().find(|c| !c.is_whitespace());
                if !next_word.is_some_and(|c| c.is_lowercase()) {
                    push(start, end, &mut sentences);
                    start = end;
                }
            }
            i = end;
            continue;
        }
        i += 1;
    }
    push(start, n, &mut sentences);
    sentences
}

static DATELINE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*[A-Z][A-Z.'&-]+(?:,?\s+[A-Z][A-Z.'&-]*){0,3},?\s*(?:\([A-Za-z .]+\)\s*)?(?:_|--)\s*")
        .unwrap()
});

/// Removes a leading news-agency dateline such as `WASHINGTON _` or
/// `NEW YORK (AP) --`.
pub fn strip_dateline(body: &str) -> &str {
    match DATELINE_RE.find(body) {
        Some(m) => &body[m.end()..],
        None => body,
    }
}

/// Lowercases, strips surrounding punctuation and removes stopwords.
///
/// Hyphens and apostrophes inside a word are kept; a trailing possessive
/// `'s` is dropped.
pub fn filter_tokens(raw_sentence: &str, stoplist: &Stoplist) -> Vec<String> {
    raw_sentence
        .split_whitespace()
        .flat_map(|w| w.split("--"))
        .filter_map(|word| {
            let lower = word.to_lowercase().replace('’', "'");
            let trimmed = lower.trim_matches(|c: char| !c.is_alphanumeric());
            let trimmed = trimmed.strip_suffix("'s").unwrap_or(trimmed);
            let trimmed = trimmed.trim_matches(|c: char| !c.is_alphanumeric());
            (!trimmed.is_empty() && !stoplist.contains(trimmed)).then(|| trimmed.to_string())
        })
        .collect()
}

const MONTHS: [&str; 12] = [
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];

pub(crate) fn month_number(token: &str) -> Option<u32> {
    let t = token.trim_end_matches('.');
    if let Some(i) = MONTHS.iter().position(|m| *m == t) {
        return Some(i as u32 + 1);
    }
    let abbreviated = match t {
        "jan" => 1,
        "feb" => 2,
        "apr" => 4,
        "jun" => 6,
        "jul" => 7,
        "aug" => 8,
        "sep" | "sept" => 9,
        "oct" => 10,
        "nov" => 11,
        "dec" => 12,
        _ => return None,
    };
    Some(abbreviated)
}

fn day_number(token: &str) -> Option<u32> {
    let t = token.trim_end_matches(',');
    let digits = t
        .strip_suffix("st")
        .or_else(|| t.strip_suffix("nd"))
        .or_else(|| t.strip_suffix("rd"))
        .or_else(|| t.strip_suffix("th"))
        .unwrap_or(t);
    if digits.is_empty() || digits.len() > 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|d| (1..=31).contains(d))
}

fn year_number(token: &str) -> Option<i32> {
    let t = token.trim_end_matches(',');
    (t.len() == 4 && t.bytes().all(|b| b.is_ascii_digit()))
        .then(|| t.parse().ok())
        .flatten()
}

fn numeric_date(token: &str) -> Option<(u32, u32, i32)> {
    let mut parts = token.split('/');
    let (m, d, y) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() || m.len() > 2 || d.len() > 2 {
        return None;
    }
    let (m, d, y): (u32, u32, i32) = (m.parse().ok()?, d.parse().ok()?, year_number(y)?);
    NaiveDate::from_ymd_opt(y, m, d).map(|_| (m, d, y))
}

fn date_tokens(main: String, month: u32, year: i32) -> [String; 3] {
    [
        main,
        format!("_{}_", MONTHS[month as usize - 1]),
        format!("_{year}_"),
    ]
}

/// Collapses date expressions into one token and appends month and year
/// enrichment tokens.
///
/// * `december 15 1982` → `12/15/1982 _december_ _1982_`
/// * `january 1998` → `01_1998 _january_ _1998_`
/// * `12/15/1982` → `12/15/1982 _december_ _1982_`
pub fn normalize_dates(tokens: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let token = tokens[i].as_str();
        if let Some(month) = month_number(token) {
            let day = tokens.get(i + 1).and_then(|t| day_number(t));
            let year_after_day = tokens.get(i + 2).and_then(|t| year_number(t));
            if let (Some(day), Some(year)) = (day, year_after_day) {
                if NaiveDate::from_ymd_opt(year, month, day).is_some() {
                    out.extend(date_tokens(format!("{month:02}/{day:02}/{year}"), month, year));
                    i += 3;
                    continue;
                }
            }
            if let Some(year) = tokens.get(i + 1).and_then(|t| year_number(t)) {
                out.extend(date_tokens(format!("{month:02}_{year}"), month, year));
                i += 2;
                continue;
            }
        } else if let Some((month, day, year)) = numeric_date(token) {
            out.extend(date_tokens(format!("{month:02}/{day:02}/{year}"), month, year));
            i += 1;
            continue;
        }
        out.push(tokens[i].clone());
        i += 1;
    }
    out
}

pub fn normalize_words(tokens: &[String], lexicon: &Lexicon) -> Vec<String> {
    tokens
        .iter()
        .map(|t| lexicon.normalize(t).to_string())
        .collect()
}

/// Stoplist and lexicon bundled for running the whole chain.
#[derive(Clone, Debug)]
pub struct Preprocessor {
    pub stoplist: Stoplist,
    pub lexicon: Lexicon,
}

impl Preprocessor {
    pub fn new(stoplist: Stoplist, lexicon: Lexicon) -> Self {
        Self { stoplist, lexicon }
    }

    /// filter → dates → words, for one piece of raw text.
    pub fn tokens(&self, raw: &str) -> Vec<String> {
        let filtered = filter_tokens(raw, &self.stoplist);
        let dated = normalize_dates(&filtered);
        normalize_words(&dated, &self.lexicon)
    }

    /// Splits and processes `doc`; sentences with no token left are dropped.
    pub fn process_document(&self, doc: &Document, doc_position: usize) -> Vec<Sentence> {
        split_sentences(strip_dateline(&doc.body))
            .into_iter()
            .enumerate()
            .filter_map(|(index, raw)| {
                let tokens = self.tokens(&raw);
                let word_count = raw.split_whitespace().count();
                (!tokens.is_empty() && word_count > 0).then(|| Sentence {
                    doc_id: doc.id.clone(),
                    doc_timestamp: doc.timestamp,
                    doc_position,
                    index,
                    raw,
                    tokens,
                    word_count,
                })
            })
            .collect()
    }

    pub fn process_cluster(&self, cluster: Cluster) -> ProcessedCluster {
        let sentences = cluster
            .documents
            .iter()
            .enumerate()
            .flat_map(|(pos, doc)| self.process_document(doc, pos))
            .collect();
        ProcessedCluster { cluster, sentences }
    }

    pub fn process_topic(&self, topic: &mut Topic) {
        topic.query_tokens = self.tokens(&topic.query_text());
    }
}

/// [`Preprocessor::process_document`] with explicit resources.
pub fn preprocess_document(doc: &Document, stoplist: &Stoplist, lexicon: &Lexicon) -> Vec<Sentence> {
    Preprocessor::new(stoplist.clone(), lexicon.clone()).process_document(doc, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::Resources;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn splits_at_terminators() {
        assert_eq!(split_sentences("A. B? C!"), ["A.", "B?", "C!"]);
        assert!(split_sentences("").is_empty());
    }

    #[test]
    fn middle_initial_is_not_a_boundary() {
        assert_eq!(
            split_sentences("George W. Bush said. Then he left."),
            ["George W. Bush said.", "Then he left."]
        );
        assert_eq!(
            split_sentences("He met Monica S. Lewinsky."),
            ["He met Monica S. Lewinsky."]
        );
    }

    #[test]
    fn dotted_abbreviation_is_not_a_boundary() {
        assert_eq!(
            split_sentences("Last month, U.S. scientists issued a report. It said so."),
            ["Last month, U.S. scientists issued a report.", "It said so."]
        );
        assert_eq!(split_sentences("End. Next"), ["End.", "Next"]);
    }

    #[test]
    fn guard_marks_only_protected_dots() {
        let g = guard_person_names("Monica S. Lewinsky. End. Next");
        assert_eq!(g.matches(GUARD).count(), 1);
        assert_eq!(g.matches('.').count(), 2);
        assert!(!guard_person_names("End. Next").contains(GUARD));
        let us = guard_person_names("U.S. scientists");
        assert_eq!(us.matches(GUARD).count(), 1);
    }

    #[test]
    fn titles_and_quotes() {
        assert_eq!(
            split_sentences("Mr. Smith arrived. \"It is over.\" She left."),
            ["Mr. Smith arrived.", "\"It is over.\"", "She left."]
        );
        assert_eq!(split_sentences("Pi is 3.14 today. Yes."), ["Pi is 3.14 today.", "Yes."]);
    }

    #[test]
    fn blank_line_ends_a_sentence() {
        assert_eq!(split_sentences("A heading\n\nBody text."), ["A heading", "Body text."]);
    }

    #[test]
    fn dateline_is_stripped() {
        assert_eq!(strip_dateline("WASHINGTON _ A federal judge"), "A federal judge");
        assert_eq!(strip_dateline("NEW YORK (AP) -- Stocks fell"), "Stocks fell");
        assert_eq!(strip_dateline("NEW YORK It's check-in day"), "NEW YORK It's check-in day");
        assert_eq!(strip_dateline("A federal judge"), "A federal judge");
    }

    #[test]
    fn filter_examples() {
        let stop = Stoplist::from_words(["the", "a"]);
        assert_eq!(
            filter_tokens("A federal judge Monday found", &stop),
            toks("federal judge monday found")
        );
        assert!(filter_tokens("The the THE", &Stoplist::from_words(["the"])).is_empty());
        assert_eq!(filter_tokens("don't-stop!", &stop), ["don't-stop"]);
        assert_eq!(filter_tokens("Stewart's -- (prison)", &stop), ["stewart", "prison"]);
    }

    #[test]
    fn date_examples() {
        assert_eq!(
            normalize_dates(&toks("december 15 1982")),
            toks("12/15/1982 _december_ _1982_")
        );
        assert_eq!(
            normalize_dates(&toks("december 15, 1982")),
            toks("12/15/1982 _december_ _1982_")
        );
        assert_eq!(
            normalize_dates(&toks("clinton january 1998 deposition")),
            toks("clinton 01_1998 _january_ _1998_ deposition")
        );
        assert_eq!(normalize_dates(&toks("15 december")), toks("15 december"));
        assert_eq!(
            normalize_dates(&toks("on 9/3/2005")),
            toks("on 09/03/2005 _september_ _2005_")
        );
        assert_eq!(normalize_dates(&toks("february 30 2001")), toks("february 30 2001"));
    }

    #[test]
    fn word_examples() {
        let lex = &Resources::builtin().preprocessor.lexicon;
        assert_eq!(normalize_words(&toks("went found zyzzyx"), lex), toks("go find zyzzyx"));
    }

    #[test]
    fn lexicon_ambiguity_uses_frequency() {
        let lex = Lexicon::parse("saw\tsee\t100\nsaw\tsaw\t5\n", "t").unwrap();
        assert_eq!(lex.normalize("saw"), "see");
    }

    #[test]
    fn lexicon_chains_and_cycles_resolve() {
        let lex = Lexicon::from_pairs([("a", "b"), ("b", "c"), ("x", "y"), ("y", "x")]);
        assert_eq!(lex.normalize("a"), "c");
        assert_eq!(lex.normalize("x"), lex.normalize("y"));
        assert_eq!(lex.normalize(lex.normalize("y")), lex.normalize("y"));
    }

    #[test]
    fn lexicon_rejects_bad_lines() {
        assert!(Lexicon::parse("went\tgo\n", "t").is_err());
        assert!(Lexicon::parse("went\tgo\tmany\n", "t").is_err());
    }

    #[test]
    fn punctuation_only_document_yields_nothing() {
        let p = Resources::builtin().preprocessor;
        let doc = Document {
            id: "d".into(),
            timestamp: NaiveDate::from_ymd_opt(2000, 1, 1).unwrap(),
            headline: None,
            body: "... !!! ??".into(),
            cluster_id: "c".into(),
        };
        assert!(p.process_document(&doc, 0).is_empty());
        let doc = Document {
            body: "Glaciers retreat quickly.".into(),
            ..doc
        };
        let s = p.process_document(&doc, 0);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].index, 0);
        assert_eq!(s[0].word_count, 3);
    }

    proptest! {
        #[test]
        fn split_reconstructs_body(body in "[A-Za-z .!?,\n]{0,80}") {
            let joined: String = split_sentences(&body).concat();
            let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            prop_assert_eq!(strip(&joined), strip(&body));
        }

        #[test]
        fn filter_output_is_clean(text in "[A-Za-z'!,. -]{0,60}") {
            let res = Resources::builtin();
            let stop = &res.preprocessor.stoplist;
            for t in filter_tokens(&text, stop) {
                prop_assert!(!stop.contains(&t));
                prop_assert!(!t.chars().any(char::is_uppercase));
                prop_assert!(t.chars().any(char::is_alphanumeric));
            }
        }

        #[test]
        fn word_normalization_is_idempotent(text in "[a-z ]{0,60}") {
            let res = Resources::builtin();
            let lex = &res.preprocessor.lexicon;
            let once = normalize_words(&toks(&text), lex);
            prop_assert_eq!(normalize_words(&once, lex), once);
        }
    }

    #[test]
    fn builtin_lexicon_is_idempotent_everywhere() {
        let lex = &Resources::builtin().preprocessor.lexicon;
        for root in lex.roots.values() {
            assert_eq!(lex.normalize(root), root);
        }
    }
}
