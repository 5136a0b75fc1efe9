use std::fs;
use std::path::{Path, PathBuf};

use morels_core::linker::LinkWeights;
use morels_core::morels::ScoreConfig;
use morels_core::records::{parse_record, Record};

use crate::corpus::Error;

/// Inputs and settings for one run. Command-line flags override values read
/// from a config file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub morphemes: Option<PathBuf>,
    pub paradigms: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub max_depth: usize,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lexicon: None,
            morphemes: None,
            paradigms: None,
            weights: None,
            max_depth: 3,
            out: None,
            jobs: 1,
        }
    }
}

fn positive(rec: &Record, key: &str, path: &Path) -> Result<Option<usize>, Error> {
    let Some(raw) = rec.atom(key) else { return Ok(None) };
    match raw.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Some(n)),
        _ => Err(Error::Parse {
            path: path.to_path_buf(),
            message: format!("{key} must be a positive integer, got {raw:?}"),
        }),
    }
}

impl RunConfig {
    /// Reads a config record. Relative paths inside it are resolved against
    /// the directory holding the file.
    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let rec = parse_record(&text).map_err(|e| Error::parse(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let file = |key: &str| rec.atom(key).map(|p| dir.join(p));
        let mut cfg = RunConfig {
            lexicon: file("Lexicon"),
            morphemes: file("Morphemes"),
            paradigms: file("Paradigms"),
            weights: file("Weights"),
            out: file("Out"),
            ..RunConfig::default()
        };
        if let Some(d) = positive(&rec, "MaxDepth", path)? {
            cfg.max_depth = d;
        }
        if let Some(j) = positive(&rec, "Jobs", path)? {
            cfg.jobs = j;
        }
        Ok(cfg)
    }
}

/// Scoring and linking constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Weights {
    pub link: LinkWeights,
    pub score: ScoreConfig,
}

impl Weights {
    /// Parses a weights record. Absent keys keep their defaults.
    pub fn parse(text: &str, path: &Path) -> Result<Self, Error> {
        let rec = parse_record(text).map_err(|e| Error::parse(path, e))?;
        let bad = |key: &str, raw: &str| Error::Parse {
            path: path.to_path_buf(),
            message: format!("bad value {raw:?} for {key}"),
        };
        let int = |key: &str, slot: &mut i64| -> Result<(), Error> {
            if let Some(raw) = rec.atom(key) {
                *slot = raw.parse().map_err(|_| bad(key, raw))?;
            }
            Ok(())
        };
        let mut w = Weights::default();
        int("PrepMatch", &mut w.link.prep_match)?;
        int("PrepMiss", &mut w.link.prep_miss)?;
        int("DomainMatch", &mut w.link.domain_match)?;
        int("DomainMiss", &mut w.link.domain_miss)?;
        int("HypContentMatch", &mut w.link.hyp_content_match)?;
        int("FailScore", &mut w.score.fail_score)?;
        for (key, slot) in [
            ("FallbackUsesSlotWeight", &mut w.score.fallback_uses_slot_weight),
            ("HypernymSamePos", &mut w.score.hypernym_same_pos),
        ] {
            if let Some(raw) = rec.atom(key) {
                *slot = match raw.to_ascii_lowercase().as_str() {
                    "yes" | "true" => true,
                    "no" | "false" => false,
                    _ => return Err(bad(key, raw)),
                };
            }
        }
        w.link.validate().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if w.score.fail_score >= 0 {
            return Err(bad("FailScore", &w.score.fail_score.to_string()));
        }
        Ok(w)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}
