//! Noise injection and novelty-factor sweep.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use updsum_core::{Cluster, Document, Error as CoreError, RougeScores, SetLabel};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::run::{evaluate_dir, summarize_prepared, write_run, LoadedTopic, RunTally, Session};

pub const DEFAULT_NOISE_FRACTIONS: [f64; 4] = [0.0, 0.17, 0.29, 0.5];

/// Foreign documents needed for a share `fraction` of an `n`-document
/// cluster: `round(f * n / (1 - f))`, so 10 documents at 0.17, 0.29 and 0.5
/// receive 2, 4 and 10.
pub fn foreign_doc_count(n: usize, fraction: f64) -> usize {
    (fraction * n as f64 / (1.0 - fraction)).round() as usize
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Adds randomly drawn documents of other topics to every cluster.
///
/// Sampling is uniform without replacement and seeded per cluster, so the
/// result depends only on the corpus, `fraction` and `seed`.
pub fn inject_noise(topics: &[LoadedTopic], fraction: f64, seed: u64) -> CliResult<Vec<LoadedTopic>> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(CliError::Config(format!("noise fraction must lie in [0, 1), got {fraction}")));
    }
    if topics.len() < 2 {
        return Err(CoreError::NoNoiseSource.into());
    }
    let mut out = topics.to_vec();
    for (i, target) in out.iter_mut().enumerate() {
        let foreign: Vec<&Document> = topics
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, t)| [&t.a, &t.b])
            .filter_map(|c| c.as_ref().ok())
            .flat_map(|c| c.documents.iter())
            .collect();
        for cluster in [&mut target.a, &mut target.b] {
            let Ok(c) = cluster.as_mut() else {
                continue;
            };
            let k = foreign_doc_count(c.documents.len(), fraction);
            if k == 0 {
                continue;
            }
            let candidates: Vec<&Document> = foreign
                .iter()
                .copied()
                .filter(|d| c.documents.iter().all(|own| own.id != d.id))
                .collect();
            if k > candidates.len() {
                log::warn!(
                    "{}: wanted {k} foreign documents, only {} available",
                    c.id,
                    candidates.len()
                );
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(&format!("{}:{fraction}", c.id)));
            let mut documents = c.documents.clone();
            for d in candidates.choose_multiple(&mut rng, k.min(candidates.len())) {
                let mut d = (*d).clone();
                d.cluster_id = c.id.clone();
                documents.push(d);
            }
            *c = Cluster::new(c.id.clone(), c.set_label, documents);
        }
    }
    Ok(out)
}

/// One row of an experiment table.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub value: f64,
    pub dir: PathBuf,
    pub tally: RunTally,
    /// Mean scores, `None` without usable references.
    pub means: Option<RougeScores>,
    /// Foreign documents added per cluster of ten (noise only).
    pub foreign_per_ten: Option<usize>,
}

fn score(dir: &Path, session: &Session) -> CliResult<Option<RougeScores>> {
    let refs = session.references()?;
    if refs.is_empty() {
        return Ok(None);
    }
    match evaluate_dir(dir, &refs) {
        Ok(report) => Ok((!report.per_topic.is_empty()).then(|| report.means())),
        Err(CliError::Failed(msg)) => {
            log::warn!("{msg}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn cells(means: Option<RougeScores>) -> String {
    match means {
        Some(m) => format!("{:.5},{:.5},{:.5}", m.rouge1, m.rouge2, m.rouge_su4),
        None => ",,".to_string(),
    }
}

/// Short, stable rendering of a grid value (`0.04`, `0.5`, `1`).
pub fn format_value(v: f64) -> String {
    let rounded = (v * 1e9).round() / 1e9;
    format!("{rounded}")
}

pub fn write_csv(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reruns summarization with every noise fraction; each run goes to
/// `<output_dir>/noise-<fraction>/` and the table to `noise.csv`.
pub fn cmd_noise(config: RunConfig, fractions: &[f64]) -> CliResult<Vec<ExperimentRow>> {
    if fractions.is_empty() {
        return Err(CliError::Config("at least one noise fraction is required".into()));
    }
    let session = Session::open(config)?;
    if session.corpus.topics.len() < 2 {
        return Err(CoreError::NoNoiseSource.into());
    }
    let summarizer = session.summarizer(&session.config)?;
    let mut rows = Vec::new();
    for &fraction in fractions {
        let start = Instant::now();
        let noisy = inject_noise(&session.corpus.topics, fraction, session.config.seed)?;
        let prepared = session.prepare(&noisy);
        let outcomes = summarize_prepared(
            &prepared,
            &summarizer,
            &session.corpus.acronyms,
            &[SetLabel::A, SetLabel::B],
            &session.pool,
        );
        let dir = session.config.output_dir.join(format!("noise-{}", format_value(fraction)));
        let tally = write_run(&dir, "noise", &session.config, &outcomes, start.elapsed())?;
        let means = score(&dir, &session)?;
        rows.push(ExperimentRow {
            value: fraction,
            dir,
            tally,
            means,
            foreign_per_ten: Some(foreign_doc_count(10, fraction)),
        });
    }
    let mut csv = String::from("fraction,foreign_per_10,summaries,failed,rouge1,rouge2,rouge_su4\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            format_value(r.value),
            r.foreign_per_ten.unwrap_or(0),
            r.tally.summaries,
            r.tally.failures,
            cells(r.means)
        );
    }
    write_csv(&session.config.output_dir.join("noise.csv"), &csv)?;
    Ok(rows)
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Config(format!("bad grid `{spec}`: {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if let [start, stop, step] = spec.split(':').collect::<Vec<_>>()[..] {
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad("need start <= stop and step > 0"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect()
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(number)
            .collect::<CliResult<Vec<f64>>>()?
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(bad(&format!("novelty factor {v} must be finite and >= 0")));
    }
    Ok(values)
}

/// Reruns set-B summarization for every novelty factor in `grid`; runs go
/// to `<output_dir>/sweep-nf/nf-<value>/` and the table to `sweep-nf.csv`.
pub fn cmd_sweep_nf(config: RunConfig, grid: &[f64]) -> CliResult<Vec<ExperimentRow>> {
    if grid.is_empty() {
        return Err(CliError::Config("empty novelty-factor grid".into()));
    }
    let session = Session::open(config)?;
    let prepared = session.prepare(&session.corpus.topics);
    let mut rows = Vec::new();
    for &nf in grid {
        let start = Instant::now();
        let config = RunConfig {
            nf_override: Some(nf),
            ..session.config.clone()
        };
        let summarizer = session.summarizer(&config)?;
        let outcomes = summarize_prepared(
            &prepared,
            &summarizer,
            &session.corpus.acronyms,
            &[SetLabel::B],
            &session.pool,
        );
        let dir = session
            .config
            .output_dir
            .join("sweep-nf")
            .join(format!("nf-{}", format_value(nf)));
        let tally = write_run(&dir, "sweep-nf", &config, &outcomes, start.elapsed())?;
        let means = score(&dir, &session)?;
        rows.push(ExperimentRow {
            value: nf,
            dir,
            tally,
            means,
            foreign_per_ten: None,
        });
    }
    let mut csv = String::from("nf,summaries,failed,rouge1,rouge2,rouge_su4\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            format_value(r.value),
            r.tally.summaries,
            r.tally.failures,
            cells(r.means)
        );
    }
    write_csv(&session.config.output_dir.join("sweep-nf.csv"), &csv)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn foreign_counts_match_published_grid() {
        assert_eq!(foreign_doc_count(10, 0.17), 2);
        assert_eq!(foreign_doc_count(10, 0.29), 4);
        assert_eq!(foreign_doc_count(10, 0.5), 10);
        assert_eq!(foreign_doc_count(10, 0.0), 0);
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:1:0.04").unwrap();
        assert_eq!(g.len(), 26);
        assert_eq!(g[3], 0.12);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(parse_grid("0.5, 1").unwrap(), [0.5, 1.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("-1").is_err());
        assert_eq!(format_value(g[3]), "0.12");
        assert_eq!(format_value(0.5), "0.5");
        assert_eq!(format_value(1.0), "1");
    }

    fn topic(id: &str, docs: usize) -> LoadedTopic {
        let date = chrono::NaiveDate::from_ymd_opt(2005, 1, 1).unwrap();
        let cluster = |set: SetLabel| {
            Cluster::new(
                format!("{id}-{set}"),
                set,
                (0..docs)
                    .map(|d| Document {
                        id: format!("{id}{set}{d}"),
                        timestamp: date,
                        headline: None,
                        body: "Text.".into(),
                        cluster_id: format!("{id}-{set}"),
                    })
                    .collect(),
            )
        };
        LoadedTopic {
            id: id.into(),
            topic: Err("unused".into()),
            a: Ok(cluster(SetLabel::A)),
            b: Ok(cluster(SetLabel::B)),
            warnings: Vec::new(),
        }
    }

    #[test]
    fn injection_adds_foreign_documents_only() {
        let topics = vec![topic("T1", 10), topic("T2", 10), topic("T3", 10)];
        let noisy = inject_noise(&topics, 0.29, 7).unwrap();
        let a = noisy[0].a.as_ref().unwrap();
        assert_eq!(a.documents.len(), 14);
        let foreign: Vec<_> = a.documents.iter().filter(|d| !d.id.starts_with("T1")).collect();
        assert_eq!(foreign.len(), 4);
        assert!(foreign.iter().all(|d| d.cluster_id == "T1-A"));
        assert_eq!(
            inject_noise(&topics, 0.29, 7).unwrap()[0].a.as_ref().unwrap().documents,
            a.documents
        );
        assert_eq!(inject_noise(&topics, 0.0, 7).unwrap()[1].b, topics[1].b);
        assert!(matches!(
            inject_noise(&topics[..1], 0.5, 7),
            Err(CliError::Core(CoreError::NoNoiseSource))
        ));
    }
}
