use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use morels_core::analyzer::AnalyzeOptions;
use morels_core::lexicon::Lexicon;
use morels_core::linker::LinkOptions;
use morels_core::morphemes::MorphemeTable;
use morels_core::paradigm::ParadigmSet;
use morels_core::records::{parse_records, Record};

use crate::config::{RunConfig, Weights};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("no run-on entries to compare against")]
    NoGold,
}

impl Error {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn parse(path: &Path, e: impl std::fmt::Display) -> Self {
        Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Parse { .. } | Error::NoGold => 2,
            Error::Io { .. } => 3,
        }
    }
}

/// The `.rec` files making up `path`: the file itself, or every `.rec` file
/// in the directory in name order.
pub fn record_files(path: &Path) -> Result<Vec<PathBuf>, Error> {
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if !meta.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
        let p = entry.map_err(|e| Error::io(path, e))?.path();
        if p.extension().is_some_and(|x| x == "rec") && p.is_file() {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

/// Parses every record under `path`.
pub fn read_records(path: &Path) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    for f in record_files(path)? {
        let text = fs::read_to_string(&f).map_err(|e| Error::io(&f, e))?;
        out.extend(parse_records(&text).map_err(|e| Error::parse(&f, e))?);
    }
    Ok(out)
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, Error> {
    Lexicon::from_records(read_records(path)?).map_err(|e| Error::parse(path, e))
}

pub fn load_morphemes(path: &Path) -> Result<MorphemeTable, Error> {
    MorphemeTable::from_records(read_records(path)?).map_err(|e| Error::parse(path, e))
}

pub fn load_paradigms(path: &Path) -> Result<ParadigmSet, Error> {
    ParadigmSet::from_records(&read_records(path)?).map_err(|e| Error::parse(path, e))
}

/// Everything a run reads, loaded and validated.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub lexicon: Lexicon,
    pub morphemes: MorphemeTable,
    pub paradigms: Option<ParadigmSet>,
    pub options: LinkOptions,
}

impl Corpus {
    pub fn load(cfg: &RunConfig) -> Result<Self, Error> {
        let lex_path = cfg
            .lexicon
            .as_deref()
            .ok_or_else(|| Error::Usage("no lexicon given".into()))?;
        let morph_path = cfg
            .morphemes
            .as_deref()
            .ok_or_else(|| Error::Usage("no morpheme table given".into()))?;
        let weights = match &cfg.weights {
            Some(p) => Weights::load(p)?,
            None => Weights::default(),
        };
        Ok(Self {
            lexicon: load_lexicon(lex_path)?,
            morphemes: load_morphemes(morph_path)?,
            paradigms: cfg.paradigms.as_deref().map(load_paradigms).transpose()?,
            options: LinkOptions {
                analyze: AnalyzeOptions {
                    max_depth: cfg.max_depth,
                    ..AnalyzeOptions::default()
                },
                score: weights.score,
                weights: weights.link,
            },
        })
    }
}
