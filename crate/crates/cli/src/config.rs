//! Run configuration: built-in defaults, a flat `key = value` file, then
//! command-line flags, each layer overriding the previous one.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use updsum_core::{RankingConfig, ResourcePaths, Scorer};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub data_root: PathBuf,
    pub output_dir: PathBuf,
    pub alpha: f64,
    pub nf_override: Option<f64>,
    pub lambda: f64,
    pub budget: usize,
    pub redundancy_threshold: f64,
    pub scorer: Scorer,
    pub resources: ResourcePaths,
    pub seed: u64,
    /// Worker threads. Not part of the manifest: it never changes outputs.
    #[serde(skip)]
    pub jobs: usize,
}

/// One configuration layer; `None` leaves the lower layer in place.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigLayer {
    pub data_root: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub alpha: Option<f64>,
    /// `Some(None)` explicitly clears an override set by a lower layer.
    pub nf_override: Option<Option<f64>>,
    pub lambda: Option<f64>,
    pub budget: Option<usize>,
    pub redundancy_threshold: Option<f64>,
    pub scorer: Option<Scorer>,
    pub stoplist: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub temporal_rules: Option<PathBuf>,
    pub markers: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

pub const DEFAULT_SEED: u64 = 2008;

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl ConfigLayer {
    /// Parses a flat `key = value` file. `#` starts a comment line.
    pub fn parse(text: &str, origin: &Path) -> CliResult<Self> {
        let mut layer = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| CliError::Config(format!("{}:{}: {reason}", origin.display(), n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let real = || value.parse::<f64>().map_err(|_| bad(format!("`{key}` needs a number, got `{value}`")));
            let int = || value.parse::<u64>().map_err(|_| bad(format!("`{key}` needs an integer, got `{value}`")));
            let path = || Some(PathBuf::from(value));
            match key {
                "data_root" => layer.data_root = path(),
                "output_dir" => layer.output_dir = path(),
                "alpha" => layer.alpha = Some(real()?),
                "nf" | "nf_override" => {
                    layer.nf_override = Some(match value {
                        "" | "none" | "default" => None,
                        _ => Some(real()?),
                    })
                }
                "lambda" => layer.lambda = Some(real()?),
                "budget" => layer.budget = Some(int()? as usize),
                "redundancy_threshold" => layer.redundancy_threshold = Some(real()?),
                "scorer" => layer.scorer = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
                "stoplist" => layer.stoplist = path(),
                "lexicon" => layer.lexicon = path(),
                "temporal_rules" => layer.temporal_rules = path(),
                "markers" => layer.markers = path(),
                "seed" => layer.seed = Some(int()?),
                "jobs" => layer.jobs = Some(int()? as usize),
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    /// Fields of `over` win.
    pub fn merged(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            data_root: over.data_root.or(self.data_root),
            output_dir: over.output_dir.or(self.output_dir),
            alpha: over.alpha.or(self.alpha),
            nf_override: over.nf_override.or(self.nf_override),
            lambda: over.lambda.or(self.lambda),
            budget: over.budget.or(self.budget),
            redundancy_threshold: over.redundancy_threshold.or(self.redundancy_threshold),
            scorer: over.scorer.or(self.scorer),
            stoplist: over.stoplist.or(self.stoplist),
            lexicon: over.lexicon.or(self.lexicon),
            temporal_rules: over.temporal_rules.or(self.temporal_rules),
            markers: over.markers.or(self.markers),
            seed: over.seed.or(self.seed),
            jobs: over.jobs.or(self.jobs),
        }
    }

    /// Fills the remaining gaps with defaults and validates the result.
    pub fn resolve(self) -> CliResult<RunConfig> {
        let defaults = RankingConfig::default();
        let config = RunConfig {
            data_root: self
                .data_root
                .ok_or_else(|| CliError::Config("data_root is required (--data-root)".into()))?,
            output_dir: self
                .output_dir
                .ok_or_else(|| CliError::Config("output_dir is required (--output-dir)".into()))?,
            alpha: self.alpha.unwrap_or(defaults.alpha),
            nf_override: self.nf_override.unwrap_or(defaults.nf_override),
            lambda: self.lambda.unwrap_or(defaults.lambda),
            budget: self.budget.unwrap_or(defaults.word_budget),
            redundancy_threshold: self.redundancy_threshold.unwrap_or(defaults.redundancy_threshold),
            scorer: self.scorer.unwrap_or(defaults.scorer),
            resources: ResourcePaths {
                stoplist: self.stoplist,
                lexicon: self.lexicon,
                temporal_rules: self.temporal_rules,
                markers: self.markers,
            },
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            jobs: self.jobs.unwrap_or_else(default_jobs),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn ranking(&self) -> RankingConfig {
        RankingConfig {
            alpha: self.alpha,
            lambda: self.lambda,
            nf_override: self.nf_override,
            word_budget: self.budget,
            redundancy_threshold: self.redundancy_threshold,
            scorer: self.scorer,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.ranking().validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        if !self.data_root.is_dir() {
            return Err(CliError::Config(format!(
                "data root {} is not a directory",
                self.data_root.display()
            )));
        }
        let r = &self.resources;
        for path in [&r.stoplist, &r.lexicon, &r.temporal_rules, &r.markers].into_iter().flatten() {
            if !path.is_file() {
                return Err(CliError::Config(format!("resource file {} not found", path.display())));
            }
        }
        Ok(())
    }

    /// Flat `key = value` echo that [`ConfigLayer::parse`] reads back.
    pub fn to_conf(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("data_root", self.data_root.display().to_string());
        put("output_dir", self.output_dir.display().to_string());
        put("alpha", self.alpha.to_string());
        put("nf", self.nf_override.map_or("none".to_string(), |v| v.to_string()));
        put("lambda", self.lambda.to_string());
        put("budget", self.budget.to_string());
        put("redundancy_threshold", self.redundancy_threshold.to_string());
        put("scorer", self.scorer.to_string());
        let r = &self.resources;
        for (k, p) in [
            ("stoplist", &r.stoplist),
            ("lexicon", &r.lexicon),
            ("temporal_rules", &r.temporal_rules),
            ("markers", &r.markers),
        ] {
            if let Some(p) = p {
                put(k, p.display().to_string());
            }
        }
        put("seed", self.seed.to_string());
        out
    }
}
