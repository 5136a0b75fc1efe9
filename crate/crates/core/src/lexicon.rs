//! Dictionary senses, indexed by headword and part of speech.
//!
//! Each top-level record is one sense. `Headword`, `Cat`, `Ldoce` (the
//! normalized sense number, 100 and up) and `Defin` are required; `Preps`,
//! `Paradigm` and `RunOn` are optional metadata. Attributes whose records all
//! carry `Lemma`, `Ldoce` and `Morels` are derivational links; every other
//! attribute is a semantic relation.
//!
//! Sense number 0 is reserved for word-level pseudo-senses, which hold links
//! between two words whose individual senses could not be linked.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::category::Category;
use crate::records::{parse_records, ParseError, Record, Value};

/// Sense number of word-level pseudo-senses.
pub const WORD_LEVEL: u32 = 0;

const META_ATTRS: [&str; 8] = ["Headword", "Cat", "Ldoce", "Defin", "Preps", "Paradigm", "RunOn", "Exs"];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SenseKey {
    /// Lowercased headword.
    pub headword: String,
    pub pos: Category,
    pub sense_no: u32,
}

impl SenseKey {
    pub fn new(headword: &str, pos: Category, sense_no: u32) -> Self {
        Self {
            headword: headword.to_lowercase(),
            pos,
            sense_no,
        }
    }
}

impl fmt::Display for SenseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({},{})", self.headword, self.pos.as_lower(), self.sense_no)
    }
}

/// One derivational edge stored on a sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub lemma: String,
    pub pos: Category,
    pub ldoce: u32,
    pub morels: i64,
}

impl Link {
    pub fn target(&self) -> SenseKey {
        SenseKey::new(&self.lemma, self.pos, self.ldoce)
    }

    pub fn to_record(&self) -> Record {
        Record::new()
            .with_atom("Ldoce", self.ldoce.to_string())
            .with_atom("Lemma", self.lemma.clone())
            .with_atom("Cat", self.pos.as_atom())
            .with_atom("Morels", self.morels.to_string())
    }

    fn same_target(&self, rec: &Record) -> bool {
        rec.atom("Lemma").is_some_and(|l| l.eq_ignore_ascii_case(&self.lemma))
            && rec.atom("Ldoce").and_then(|n| n.parse::<u32>().ok()) == Some(self.ldoce)
            && rec
                .atom("Cat")
                .and_then(|c| c.parse::<Category>().ok())
                .unwrap_or(self.pos)
                == self.pos
    }
}

/// A run-on declared on a base entry: an undefined derived form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOn {
    pub derived: String,
    pub pos: Category,
    pub base: String,
    /// LDOCE attaches the form to its ultimate base rather than its
    /// immediate one (`journalistically` under `journalism`).
    pub flattened: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sense {
    pub headword: String,
    pub pos: Category,
    pub sense_no: u32,
    pub defin: String,
    pub relations: Record,
    pub preps: BTreeSet<String>,
    pub paradigm: Option<String>,
    links: Vec<(String, Link)>,
    record: Record,
}

impl Sense {
    pub fn key(&self) -> SenseKey {
        SenseKey::new(&self.headword, self.pos, self.sense_no)
    }

    pub fn is_word_level(&self) -> bool {
        self.sense_no == WORD_LEVEL
    }

    /// The full source record, including link attributes.
    pub fn record(&self) -> &Record {
        &self.record
    }

    /// `(attribute, link)` pairs in record order.
    pub fn links(&self) -> &[(String, Link)] {
        &self.links
    }

    pub fn links_under<'a>(&'a self, attr: &'a str) -> impl Iterator<Item = &'a Link> + 'a {
        self.links.iter().filter(move |(a, _)| a == attr).map(|(_, l)| l)
    }

    /// Lowercased `Lemma` atoms of the top-level records of relation `name`.
    pub fn relation_lemmas(&self, name: &str) -> BTreeSet<String> {
        self.relations
            .records(name)
            .filter_map(|r| r.atom("Lemma"))
            .map(str::to_lowercase)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("record {index} lacks required attribute {attr}")]
    MissingRequiredAttr { index: usize, attr: &'static str },
    #[error("duplicate sense {0}")]
    DuplicateSense(SenseKey),
    #[error("{headword}: bad sense number {value:?}")]
    BadSenseNumber { headword: String, value: String },
    #[error("{headword}: bad part of speech {value:?}")]
    BadCategory { headword: String, value: String },
    #[error("{headword}: malformed link under {attr}")]
    BadLink { headword: String, attr: String },
    #[error("unknown sense {0}")]
    UnknownSense(SenseKey),
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    senses: Vec<Sense>,
    index: BTreeMap<(String, Category), Vec<usize>>,
    runons: Vec<RunOn>,
}

/// Loads a lexicon from record text, one record per sense.
pub fn load_lexicon(text: &str) -> Result<Lexicon, LexiconError> {
    Lexicon::from_records(parse_records(text)?)
}

fn is_link_value(v: &Value) -> bool {
    let recs: &[Record] = match v {
        Value::Rec(r) => core::slice::from_ref(r),
        Value::RecList(rs) => rs,
        _ => return false,
    };
    !recs.is_empty()
        && recs
            .iter()
            .all(|r| r.atom("Lemma").is_some() && r.atom("Ldoce").is_some() && r.atom("Morels").is_some())
}

fn parse_link(rec: &Record, headword: &str, attr: &str, default_pos: Category) -> Result<Link, LexiconError> {
    let bad = || LexiconError::BadLink {
        headword: headword.to_string(),
        attr: attr.to_string(),
    };
    let pos = match rec.atom("Cat") {
        Some(c) => c.parse().map_err(|_| bad())?,
        None => default_pos,
    };
    Ok(Link {
        lemma: rec.atom("Lemma").ok_or_else(bad)?.to_string(),
        pos,
        ldoce: rec.atom("Ldoce").and_then(|n| n.parse().ok()).ok_or_else(bad)?,
        morels: rec.atom("Morels").and_then(|n| n.parse().ok()).ok_or_else(bad)?,
    })
}

fn sense_from_record(record: Record, index: usize) -> Result<(Sense, Vec<RunOn>), LexiconError> {
    let required = |attr: &'static str| {
        record
            .atom(attr)
            .ok_or(LexiconError::MissingRequiredAttr { index, attr })
    };
    let headword = required("Headword")?.to_string();
    let cat = required("Cat")?;
    let pos: Category = cat.parse().map_err(|_| LexiconError::BadCategory {
        headword: headword.clone(),
        value: cat.to_string(),
    })?;
    let ldoce = required("Ldoce")?;
    let sense_no = match ldoce.parse::<u32>() {
        Ok(n) if n == WORD_LEVEL || n >= 100 => n,
        _ => {
            return Err(LexiconError::BadSenseNumber {
                headword,
                value: ldoce.to_string(),
            })
        }
    };
    let defin = required("Defin")?.to_string();

    let mut relations = Record::new();
    let mut links = Vec::new();
    for (name, value) in record.iter() {
        if META_ATTRS.contains(&name) {
            continue;
        }
        if is_link_value(value) {
            for r in record.records(name) {
                // Link records written by older tools may omit `Cat`; they
                // then point at a sense of the same part of speech.
                links.push((name.to_string(), parse_link(r, &headword, name, pos)?));
            }
        } else {
            relations.push(name, value.clone());
        }
    }

    let mut runons = Vec::new();
    for r in record.records("RunOn") {
        let derived = r
            .atom("Lemma")
            .ok_or(LexiconError::MissingRequiredAttr { index, attr: "Lemma" })?;
        let cat = r
            .atom("Cat")
            .ok_or(LexiconError::MissingRequiredAttr { index, attr: "Cat" })?;
        let rpos = cat.parse().map_err(|_| LexiconError::BadCategory {
            headword: derived.to_string(),
            value: cat.to_string(),
        })?;
        let flattened = r
            .atom("Flattened")
            .is_some_and(|f| f.eq_ignore_ascii_case("yes") || f.eq_ignore_ascii_case("true"));
        runons.push(RunOn {
            derived: derived.to_lowercase(),
            pos: rpos,
            base: headword.to_lowercase(),
            flattened,
        });
    }

    let sense = Sense {
        preps: record.atoms("Preps").into_iter().map(str::to_lowercase).collect(),
        paradigm: record.atom("Paradigm").map(str::to_string),
        headword,
        pos,
        sense_no,
        defin,
        relations,
        links,
        record,
    };
    Ok((sense, runons))
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: impl IntoIterator<Item = Record>) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::new();
        for (i, rec) in records.into_iter().enumerate() {
            lex.insert_record(rec, i)?;
        }
        Ok(lex)
    }

    fn insert_record(&mut self, rec: Record, index: usize) -> Result<SenseKey, LexiconError> {
        let (sense, runons) = sense_from_record(rec, index)?;
        let key = sense.key();
        if self.get(&key).is_some() {
            return Err(LexiconError::DuplicateSense(key));
        }
        let slot = self.senses.len();
        let entry = self.index.entry((key.headword.clone(), key.pos)).or_default();
        let senses = &self.senses;
        let at = entry.partition_point(|&i| senses[i].sense_no < key.sense_no);
        entry.insert(at, slot);
        self.senses.push(sense);
        self.runons.extend(runons);
        Ok(key)
    }

    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }

    /// All senses, including word-level pseudo-senses, in load order.
    pub fn senses(&self) -> &[Sense] {
        &self.senses
    }

    pub fn get(&self, key: &SenseKey) -> Option<&Sense> {
        let ids = self.index.get(&(key.headword.clone(), key.pos))?;
        ids.iter()
            .map(|&i| &self.senses[i])
            .find(|s| s.sense_no == key.sense_no)
    }

    fn position(&self, key: &SenseKey) -> Option<usize> {
        let ids = self.index.get(&(key.headword.clone(), key.pos))?;
        ids.iter().copied().find(|&i| self.senses[i].sense_no == key.sense_no)
    }

    /// Whether `lemma` has at least one real sense with part of speech `pos`.
    pub fn has(&self, lemma: &str, pos: Category) -> bool {
        !self.lookup(lemma, Some(pos)).is_empty()
    }

    /// Real senses of `lemma` (case-insensitive), optionally restricted to one
    /// part of speech, ordered by part of speech then sense number.
    pub fn lookup(&self, lemma: &str, pos: Option<Category>) -> Vec<&Sense> {
        let lemma = lemma.to_lowercase();
        let cats: &[Category] = match &pos {
            Some(p) => core::slice::from_ref(p),
            None => &Category::ALL,
        };
        let mut out = Vec::new();
        for &cat in cats {
            if let Some(ids) = self.index.get(&(lemma.clone(), cat)) {
                out.extend(ids.iter().map(|&i| &self.senses[i]).filter(|s| !s.is_word_level()));
            }
        }
        out
    }

    /// Word-level pseudo-sense of a headword, if one has been created.
    pub fn word_level(&self, lemma: &str, pos: Category) -> Option<&Sense> {
        self.get(&SenseKey::new(lemma, pos, WORD_LEVEL))
    }

    /// Distinct `(headword, pos)` pairs with at least one real sense, sorted.
    pub fn headwords(&self) -> Vec<(&str, Category)> {
        self.index
            .iter()
            .filter(|(_, ids)| ids.iter().any(|&i| !self.senses[i].is_word_level()))
            .map(|((w, p), _)| (w.as_str(), *p))
            .collect()
    }

    /// Lemmas stored directly under `Hypernym` in the matching senses. Never
    /// follows hypernyms further.
    pub fn hypernyms_of(&self, lemma: &str, pos: Option<Category>) -> BTreeSet<String> {
        self.lookup(lemma, pos)
            .into_iter()
            .flat_map(|s| s.relation_lemmas("Hypernym"))
            .collect()
    }

    /// Gold `(derived, pos, base)` triples from `RunOn` declarations, in
    /// document order.
    pub fn gold_runons(&self) -> Vec<(String, Category, String)> {
        self.runons
            .iter()
            .map(|r| (r.derived.clone(), r.pos, r.base.clone()))
            .collect()
    }

    pub fn runons(&self) -> &[RunOn] {
        &self.runons
    }

    /// `(derived, base)` pairs whose run-on is marked as flattened.
    pub fn flattening_exceptions(&self) -> Vec<(String, String)> {
        self.runons
            .iter()
            .filter(|r| r.flattened)
            .map(|r| (r.derived.clone(), r.base.clone()))
            .collect()
    }

    /// Creates the word-level pseudo-sense for a headword if it is missing.
    pub fn ensure_word_level(&mut self, headword: &str, pos: Category) -> SenseKey {
        let key = SenseKey::new(headword, pos, WORD_LEVEL);
        if self.get(&key).is_none() {
            let display = self
                .lookup(headword, Some(pos))
                .first()
                .map(|s| s.headword.clone())
                .unwrap_or_else(|| key.headword.clone());
            let rec = Record::new()
                .with_atom("Headword", display)
                .with_atom("Cat", pos.as_atom())
                .with_atom("Ldoce", "0")
                .with_atom("Defin", "");
            let index = self.senses.len();
            self.insert_record(rec, index)
                .expect("pseudo-sense record is well formed and absent");
        }
        key
    }

    /// Adds `link` under `attr` on sense `from`. A link to the same target
    /// sense under the same attribute is updated in place rather than
    /// duplicated.
    pub fn apply_link(&mut self, from: &SenseKey, attr: &str, link: &Link) -> Result<(), LexiconError> {
        let idx = self
            .position(from)
            .ok_or_else(|| LexiconError::UnknownSense(from.clone()))?;
        let sense = &mut self.senses[idx];

        let mut updated = false;
        if sense.record.get(attr).is_some_and(is_link_value) {
            if let Some(existing) = sense.record.records_mut(attr).find(|r| link.same_target(r)) {
                existing.set_atom("Morels", link.morels.to_string());
                updated = true;
            }
        }
        if updated {
            for (a, l) in sense.links.iter_mut() {
                if a == attr && l.target() == link.target() {
                    l.morels = link.morels;
                }
            }
        } else {
            sense.record.push_record(attr, link.to_record());
            sense.links.push((attr.to_string(), link.clone()));
        }
        Ok(())
    }

    /// Source records of every sense, in load order.
    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.senses.iter().map(|s| &s.record)
    }
}
