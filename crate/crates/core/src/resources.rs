//! Linguistic resources: stoplist, lexicon, temporal rewrite rules and
//! discourse markers. Defaults are compiled into the crate; each can be
//! replaced by a file.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::assembly::{DiscursiveMarkers, TemporalRules};
use crate::error::{Error, Result};
use crate::preprocess::{Lexicon, Preprocessor, Stoplist};

pub const STOPLIST: &str = include_str!("../resources/stoplist.txt");
pub const LEXICON: &str = include_str!("../resources/lexicon.tsv");
pub const TEMPORAL_RULES: &str = include_str!("../resources/temporal_rules.tsv");
pub const DISCURSIVE_MARKERS: &str = include_str!("../resources/discursive_markers.txt");

static BUILTIN: LazyLock<Resources> = LazyLock::new(|| Resources {
    preprocessor: Preprocessor::new(
        Stoplist::parse(STOPLIST),
        Lexicon::parse(LEXICON, "builtin lexicon").expect("builtin lexicon is well-formed"),
    ),
    temporal: TemporalRules::parse(TEMPORAL_RULES, "builtin temporal rules")
        .expect("builtin temporal rules are well-formed"),
    markers: DiscursiveMarkers::parse(DISCURSIVE_MARKERS),
});

/// Optional file overrides; `None` selects the built-in resource.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourcePaths {
    pub stoplist: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub temporal_rules: Option<PathBuf>,
    pub markers: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Resources {
    pub preprocessor: Preprocessor,
    pub temporal: TemporalRules,
    pub markers: DiscursiveMarkers,
}

impl Resources {
    pub fn builtin() -> Self {
        BUILTIN.clone()
    }

    pub fn load(paths: &ResourcePaths) -> Result<Self> {
        let builtin = &*BUILTIN;
        let stoplist = match &paths.stoplist {
            Some(p) => Stoplist::parse(&read(p)?),
            None => builtin.preprocessor.stoplist.clone(),
        };
        let lexicon = match &paths.lexicon {
            Some(p) => Lexicon::parse(&read(p)?, &p.display().to_string())?,
            None => builtin.preprocessor.lexicon.clone(),
        };
        let temporal = match &paths.temporal_rules {
            Some(p) => TemporalRules::parse(&read(p)?, &p.display().to_string())?,
            None => builtin.temporal.clone(),
        };
        let markers = match &paths.markers {
            Some(p) => DiscursiveMarkers::parse(&read(p)?),
            None => builtin.markers.clone(),
        };
        Ok(Self {
            preprocessor: Preprocessor::new(stoplist, lexicon),
            temporal,
            markers,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
